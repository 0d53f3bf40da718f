//! Ferromagnetic ground state of the m = 0 block: exact amplitudes against the
//! hypercharge Gaussian and the Y-lattice chain, and the fragmented
//! one-particle density matrix.

use spinorsim::algebra::ModelParams;
use spinorsim::ground::{
    chain_solver, gaussian_profile, ground_state, one_particle_density, Parity,
};

fn main() -> spinorsim::Result<()> {
    let n: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1000);
    let (energy, psi) = ground_state(n, 0, &ModelParams::ferromagnetic())?;
    let gauss = gaussian_profile(n)?;
    let chain = chain_solver(n, Parity::Even)?;
    let odd = chain_solver(n, Parity::Odd)?;

    println!("N = {n}, E0 = {energy:.6}");
    println!(
        "|<exact|gaussian>|^2 = {:.6}",
        psi.overlap(&gauss.to_state()?)?.powi(2)
    );
    println!(
        "chain ground energies: even {:.6}, odd {:.6}",
        chain.energies[0], odd.energies[0]
    );
    println!("{}", one_particle_density(&psi)?);

    println!(
        "\n{:>6} {:>10} {:>12} {:>12} {:>12}",
        "n0", "Y", "exact", "gaussian", "chain"
    );
    let cv = chain.ground_vector();
    // only the rows that carry weight
    let peak = psi
        .amplitudes()
        .iter()
        .map(|a| a.norm())
        .fold(0.0, f64::max);
    let rows: Vec<usize> = (0..gauss.n_zero.len())
        .filter(|&i| psi.amplitudes()[i].norm() > 1e-3 * peak)
        .collect();
    let step = (rows.len() / 20).max(1);
    for &i in rows.iter().step_by(step) {
        println!(
            "{:>6} {:>10.3} {:>12.6} {:>12.6} {:>12.6}",
            gauss.n_zero[i],
            gauss.hypercharge[i],
            psi.amplitudes()[i].re,
            gauss.amplitudes[i],
            cv[i]
        );
    }
    Ok(())
}
