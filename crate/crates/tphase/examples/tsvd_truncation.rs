//! T-SVD and best rank-r approximation in the Frobenius norm.
//!
//! The T-SVD factors A = U * S * V^H with orthogonal-under-T-product factors
//! and a nonincreasing pooled singular-value list.  Keeping the r largest
//! singular values is the best T-rank-r approximation; the error is the
//! l2 norm of the dropped tail, exactly as in the matrix case.
//!
//! Run with `cargo run --example tsvd_truncation`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tphase::phase::GaugeSpec;
use tphase::sampling::random_tensor;
use tphase::{conj_transpose, t_svd, tprod, truncate_rank};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_tensor(3, 4, 2, &mut rng);

    let svd = t_svd(&a);
    println!("pooled t-singular values:");
    for s in &svd.sigma {
        println!("  {s:.9}");
    }

    // The factors are T-orthogonal and reconstruct A.
    let utu = tprod(&conj_transpose(&svd.u), &svd.u).unwrap();
    let id = tphase::Tensor3::identity(3, 2);
    println!(
        "||U^H*U - I||_F = {:.3e}",
        utu.sub(&id).unwrap().frobenius_norm()
    );
    println!(
        "||U*S*V^H - A||_F = {:.3e}",
        svd.reconstruct().sub(&a).unwrap().frobenius_norm()
    );

    // Truncate to each feasible rank and compare against the tail formula:
    // the tensor Frobenius error is the l2 norm of the dropped singular
    // values divided by sqrt(p).
    let p = a.shape().2 as f64;
    println!("\nrank  achieved error   tail formula");
    for r in 0..svd.sigma.len() {
        let t = truncate_rank(&a, r, &GaugeSpec::parse("lp:2").unwrap()).unwrap();
        let err = t.approx.sub(&a).unwrap().frobenius_norm();
        let tail = (svd.sigma[r..].iter().map(|s| s * s).sum::<f64>() / p).sqrt();
        println!("  {r}   {err:.12}  {tail:.12}  (reported {:.12})", t.value);
    }
}
