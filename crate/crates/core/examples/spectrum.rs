//! Block spectra versus the angular-momentum law E(l) = lambda_a (l(l+1) - 2N) + const.

use spinorsim::algebra::{hamiltonian_block, ModelParams};
use spinorsim::evolve::diagonalize_block;
use spinorsim::fock::BlockKey;
use spinorsim::prepare::AngularLabel;

fn main() -> spinorsim::Result<()> {
    let params = ModelParams {
        lambda_a: -1.0,
        lambda_s: 0.1,
        mu: 0.5,
        magnetic: None,
    };
    let n = 12;
    for m in 0..=3 {
        let key = BlockKey::new(n, m);
        let es = diagonalize_block(&hamiltonian_block(&params, key)?)?;
        println!("block (N={n}, m={m}), dim {}", key.dim());
        let mut ls: Vec<u32> = AngularLabel::ls(key).collect();
        // lambda_a < 0: the largest l lies lowest
        ls.reverse();
        for (e, l) in es.eigenvalues.iter().zip(ls) {
            println!(
                "  l = {l:>2}  E = {e:>12.6}  law = {:>12.6}",
                params.energy(n, l)
            );
        }
    }
    Ok(())
}
