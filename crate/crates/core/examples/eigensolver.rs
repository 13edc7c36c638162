//! The dense symmetric eigensolver on a random matrix: residual and orthogonality.
use dicke_overlap::numerics::symmetric_eigen;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

fn main() -> dicke_overlap::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let n = 300;
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let h = &a + a.transpose();
    let t = std::time::Instant::now();
    let e = symmetric_eigen(&h)?;
    let v = &e.eigenvectors;
    let residual = (&h * v - v * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.eigenvalues.clone()))).amax();
    let orth = (v.transpose() * v - DMatrix::identity(n, n)).amax();
    println!("n={n}: {:?}, max residual {residual:.1e}, orthogonality {orth:.1e}", t.elapsed());
    println!("lowest {:.6}, highest {:.6}", e.eigenvalues[0], e.eigenvalues[n - 1]);
    Ok(())
}
