//! Endomorphism rings, indecomposability and Krull–Schmidt splitting.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{eval_poly, primitive, Mat, Q};
use super::rep::{hom_space, QRep};
use super::EngineError;

/// Largest eigenvalue magnitude scanned when looking for rational roots.
const EIGEN_SCAN_LIMIT: i64 = 2_000;
const RANDOM_TRIES: usize = 40;

/// An endomorphism, one integer-scaled matrix per vertex.
type Endo = Vec<Mat>;

fn endomorphism_basis(m: &QRep) -> Result<Vec<Endo>, EngineError> {
    Ok(hom_space(m, m)?
        .into_iter()
        .map(|f| {
            let flat: Vec<Q> = f.comps.iter().flat_map(|c| (0..c.rows()).flat_map(move |r| (0..c.cols()).map(move |k| c[(r, k)].clone()))).collect();
            let scaled = primitive(&flat);
            let mut it = scaled.into_iter();
            f.comps
                .iter()
                .map(|c| {
                    let mut out = Mat::zeros(c.rows(), c.cols());
                    for r in 0..c.rows() {
                        for k in 0..c.cols() {
                            out[(r, k)] = it.next().expect("length preserved");
                        }
                    }
                    out
                })
                .collect()
        })
        .collect())
}

/// `dim End(M) / rad End(M)`, with the radical computed as the kernel of
/// the trace form `(x, y) ↦ tr(xy)` on the faithful module `M`.
pub fn top_dimension(m: &QRep) -> Result<usize, EngineError> {
    let basis = endomorphism_basis(m)?;
    let n = basis.len();
    let mut form = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = basis[i]
                .iter()
                .zip(&basis[j])
                .fold(Q::zero(), |acc, (a, b)| acc + a.mul(b).trace());
            form[(i, j)] = t.clone();
            form[(j, i)] = t;
        }
    }
    Ok(form.rank())
}

/// Nonzero with local endomorphism ring whose residue field is the ground
/// field (the only case arising for quiver representations here).
pub fn is_indecomposable(m: &QRep) -> Result<bool, EngineError> {
    Ok(!m.is_zero() && top_dimension(m)? == 1)
}

/// Splits `M` into indecomposable summands.
pub fn decompose(m: &QRep) -> Result<Vec<QRep>, EngineError> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let basis = endomorphism_basis(m)?;
    if basis.len() == 1 || top_dimension(m)? == 1 {
        return Ok(vec![m.clone()]);
    }
    for x in candidates(&basis) {
        if let Some((a, b)) = fitting_split(m, &x)? {
            let mut out = decompose(&a)?;
            out.extend(decompose(&b)?);
            return Ok(out);
        }
    }
    Err(EngineError::DecompositionFailed(format!("no splitting endomorphism found for dims {:?}", m.dims())))
}

fn candidates(basis: &[Endo]) -> impl Iterator<Item = Endo> + '_ {
    let singles = basis.iter().cloned();
    let products = basis.iter().enumerate().flat_map(move |(i, a)| {
        basis.iter().enumerate().filter(move |(j, _)| *j != i).map(move |(_, b)| compose(a, b))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    let random = (0..RANDOM_TRIES).map(move |_| {
        let coeffs: Vec<i64> = basis.iter().map(|_| rng.gen_range(-3..=3)).collect();
        combine(basis, &coeffs)
    });
    singles.chain(products).chain(random)
}

fn compose(a: &Endo, b: &Endo) -> Endo {
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
}

fn combine(basis: &[Endo], coeffs: &[i64]) -> Endo {
    let mut out: Endo = basis[0].iter().map(|c| Mat::zeros(c.rows(), c.cols())).collect();
    for (e, &k) in basis.iter().zip(coeffs) {
        if k == 0 {
            continue;
        }
        let s = super::linalg::q(k);
        for (o, c) in out.iter_mut().zip(e) {
            *o = o.add(&c.scale(&s));
        }
    }
    out
}

/// Integer eigenvalues of an integer endomorphism, each block scanned up to
/// its row-sum bound.
fn integer_eigenvalues(x: &Endo) -> Vec<i64> {
    let mut found = Vec::new();
    for block in x.iter().filter(|b| b.rows() > 0) {
        let poly = block.char_poly();
        let bound = block.row_sum_norm().to_integer().to_i64().unwrap_or(i64::MAX).min(EIGEN_SCAN_LIMIT);
        for lambda in -bound..=bound {
            if !found.contains(&lambda) && eval_poly(&poly, &Q::from_integer(BigInt::from(lambda))).is_zero() {
                found.push(lambda);
            }
        }
    }
    found
}

/// Fitting decomposition `M = ker (x−λ)^N ⊕ im (x−λ)^N`, when both parts
/// are nonzero for some eigenvalue `λ`.
fn fitting_split(m: &QRep, x: &Endo) -> Result<Option<(QRep, QRep)>, EngineError> {
    let total = m.total_dim();
    for lambda in integer_eigenvalues(x) {
        let l = Q::from_integer(BigInt::from(lambda));
        let powered: Vec<Mat> = x
            .iter()
            .map(|b| {
                let mut y = b.clone();
                for i in 0..y.rows() {
                    y[(i, i)] -= &l;
                }
                y.pow(b.rows())
            })
            .collect();
        let kernels: Vec<Mat> = powered.iter().map(|y| Mat::from_columns(y.cols(), &y.nullspace())).collect();
        let kernel_dim: usize = kernels.iter().map(Mat::cols).sum();
        if kernel_dim == 0 || kernel_dim == total {
            continue;
        }
        let images: Vec<Mat> = powered.iter().map(|y| Mat::from_columns(y.rows(), &y.column_space())).collect();
        return Ok(Some((m.subrep(&kernels)?, m.subrep(&images)?)));
    }
    Ok(None)
}
