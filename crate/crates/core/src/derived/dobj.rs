//! Indecomposable objects of the bounded derived category: a module and a
//! shift. The category is hereditary, so this covers every indecomposable.

use std::sync::Arc;

use super::decompose::decompose;
use super::rep::{ext_dim, hom_dim, injective, projective, tau, tau_inv, ModMap, QRep};
use super::EngineError;
use crate::threadquiver::Quiver;

#[derive(Clone, Debug, PartialEq)]
pub struct DObj {
    pub module: QRep,
    pub shift: i64,
}

impl DObj {
    pub fn new(module: QRep, shift: i64) -> Self {
        DObj { module, shift }
    }

    pub fn shifted(&self, by: i64) -> Self {
        DObj {
            module: self.module.clone(),
            shift: self.shift + by,
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.module.quiver()
    }
}

/// `Hom(M[s], N[t])` is `Hom(M, N)` for `t = s`, `Ext¹(M, N)` for
/// `t = s + 1` and zero otherwise.
pub fn dhom(x: &DObj, y: &DObj) -> Result<usize, EngineError> {
    match y.shift - x.shift {
        0 => hom_dim(&x.module, &y.module),
        1 => ext_dim(&x.module, &y.module),
        _ => {
            super::rep::check_same(&x.module, &y.module)?;
            Ok(0)
        }
    }
}

fn vertex_with_dims(q: &Arc<Quiver>, dims: &[usize], make: fn(&Arc<Quiver>, usize) -> Result<QRep, EngineError>) -> Result<usize, EngineError> {
    for x in 0..q.len() {
        if make(q, x)?.dims() == dims {
            return Ok(x);
        }
    }
    Err(EngineError::NotIndecomposable(format!("no vertex matches dims {dims:?}")))
}

/// `τ(M[s]) = (τM)[s]`, and `τ(P_x[s]) = I_x[s−1]`.
pub fn tau_obj(x: &DObj) -> Result<DObj, EngineError> {
    let t = tau(&x.module)?;
    if !t.is_zero() {
        return Ok(DObj::new(t, x.shift));
    }
    let q = x.quiver();
    let v = vertex_with_dims(q, x.module.dims(), projective)?;
    Ok(DObj::new(injective(q, v)?, x.shift - 1))
}

/// `τ⁻¹(M[s]) = (τ⁻¹M)[s]`, and `τ⁻¹(I_x[s]) = P_x[s+1]`.
pub fn tau_inv_obj(x: &DObj) -> Result<DObj, EngineError> {
    let t = tau_inv(&x.module)?;
    if !t.is_zero() {
        return Ok(DObj::new(t, x.shift));
    }
    let q = x.quiver();
    let v = vertex_with_dims(q, x.module.dims(), injective)?;
    Ok(DObj::new(projective(q, v)?, x.shift + 1))
}

/// Serre functor `S = τ[1]`.
pub fn serre(x: &DObj) -> Result<DObj, EngineError> {
    Ok(tau_obj(x)?.shifted(1))
}

/// Indecomposable summands of the cone of a degree-zero map, using
/// `cone(f) ≅ coker f ⊕ (ker f)[1]`.
pub fn cone_decompose(f: &ModMap) -> Result<Vec<DObj>, EngineError> {
    let mut out: Vec<DObj> = decompose(&f.cokernel()?)?.into_iter().map(|m| DObj::new(m, 0)).collect();
    out.extend(decompose(&f.kernel()?)?.into_iter().map(|m| DObj::new(m, 1)));
    Ok(out)
}

/// Hom dimensions from `x` into each probe, then from each probe into `x`.
pub fn fingerprint(x: &DObj, probes: &[DObj]) -> Result<Vec<usize>, EngineError> {
    let mut out = Vec::with_capacity(2 * probes.len());
    for p in probes {
        out.push(dhom(x, p)?);
    }
    for p in probes {
        out.push(dhom(p, x)?);
    }
    Ok(out)
}
