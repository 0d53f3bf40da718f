//! Dense identity suite: the hypercharge decomposition of L^2, the singlet-pair
//! identity (coefficient 3 vs the printed 1), SU(2) subalgebra commutators and
//! the disentangling-exponent adjudication.

use std::time::Instant;

use spinorsim::algebra::verify_identities;

fn main() -> spinorsim::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    let start = Instant::now();
    let report = verify_identities(n)?;
    print!("{report}");
    println!(
        "all as expected: {} ({:.2}s)",
        report.all_as_expected(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
