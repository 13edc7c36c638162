//! The product reference state fixed by ⟨J_z⟩, and the best a for a given distribution.
use dicke_overlap::{nearest_a, SeparableState};

fn main() -> dicke_overlap::Result<()> {
    let s = SeparableState::from_jz(-0.125, 20)?;
    println!("a = {}, <J_z>/N = {}", s.a(), s.jz_per_atom());
    let w = s.weights();
    let (lo, hi) = s.support(1e-12);
    println!("weights carry all but 1e-12 of their mass on n in [{lo}, {hi}]; w[5] = {:.6}", w[5]);

    // A Dicke state |n = 10⟩ is far from any product state.
    let mut p = vec![0.0; 21];
    p[10] = 1.0;
    let best = nearest_a(&p)?;
    println!("|n=10>: matched a gives {:.4}, best a = {:.4} gives {:.4}", best.jz_matched, best.argmax, best.max_overlap);
    Ok(())
}
