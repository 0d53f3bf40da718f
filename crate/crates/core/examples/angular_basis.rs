//! |l, m> states from the closed-form coefficients against numerical L^2
//! eigenvectors, and the l = N coefficients against their large-N form.

use spinorsim::fock::BlockKey;
use spinorsim::prepare::{
    angular_state, glmk_top, glmk_top_asymptotic, AngularLabel, AngularMethod, GlmkMethod,
};

fn main() -> spinorsim::Result<()> {
    let n = 6;
    for m in [0, 1, 2] {
        for l in AngularLabel::ls(BlockKey::new(n, m)) {
            let label = AngularLabel::new(n, l, m)?;
            let exact = angular_state(label, AngularMethod::Analytic(GlmkMethod::Exact))?;
            let numeric = angular_state(label, AngularMethod::Numeric)?;
            let coeffs: Vec<String> = exact
                .amplitudes()
                .iter()
                .map(|a| format!("{:+.5}", a.re))
                .collect();
            println!(
                "{label}: [{}]  1 - overlap = {:.1e}",
                coeffs.join(", "),
                1.0 - exact.overlap(&numeric)?
            );
        }
    }
    for big in [100, 1000] {
        let n0 = big / 2;
        let exact = glmk_top(big, 0, n0)?;
        let approx = glmk_top_asymptotic(big, n0);
        println!("N = {big}, n0 = {n0}: G = {exact:.6e}, large-N form {approx:.6e}");
    }
    Ok(())
}
