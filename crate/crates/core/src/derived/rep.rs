//! Explicit representations of a finite acyclic quiver.
//!
//! Representations are contravariant: for an arrow `α: u → v` the structure
//! matrix has shape `dim(u) × dim(v)` and maps `M(v) → M(u)`. With this
//! convention `P_x(v)` has a basis of paths `v ⇝ x` and an arrow `x → y`
//! induces a nonzero map `P_x → P_y`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::linalg::{Mat, Q};
use super::EngineError;
use crate::threadquiver::Quiver;

/// Every path of the quiver, as arrow-index sequences, grouped by endpoints.
pub struct Paths {
    by_pair: Vec<Vec<Vec<Vec<usize>>>>,
    lookup: Vec<Vec<HashMap<Vec<usize>, usize>>>,
}

/// Refuse to enumerate more paths than this.
const MAX_PATHS: usize = 200_000;

impl Paths {
    pub fn new(q: &Quiver) -> Result<Self, EngineError> {
        let order = q.topological_order()?;
        let n = q.len();
        let mut by_pair: Vec<Vec<Vec<Vec<usize>>>> = vec![vec![Vec::new(); n]; n];
        let mut total = 0usize;
        for &u in order.iter().rev() {
            by_pair[u][u].push(Vec::new());
            for (ai, a) in q.arrows().iter().enumerate().filter(|(_, a)| a.src == u) {
                for v in 0..n {
                    let extended: Vec<Vec<usize>> = by_pair[a.dst][v]
                        .iter()
                        .map(|p| std::iter::once(ai).chain(p.iter().copied()).collect())
                        .collect();
                    total += extended.len();
                    if total > MAX_PATHS {
                        return Err(EngineError::TooLarge(format!("more than {MAX_PATHS} paths")));
                    }
                    by_pair[u][v].extend(extended);
                }
            }
        }
        let lookup = by_pair
            .iter()
            .map(|row| {
                row.iter()
                    .map(|ps| ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect())
                    .collect()
            })
            .collect();
        Ok(Paths { by_pair, lookup })
    }

    pub fn between(&self, u: usize, v: usize) -> &[Vec<usize>] {
        &self.by_pair[u][v]
    }

    pub fn index(&self, u: usize, v: usize, path: &[usize]) -> Option<usize> {
        self.lookup[u][v].get(path).copied()
    }
}

#[derive(Clone, Debug)]
pub struct QRep {
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    mats: Vec<Mat>,
}

impl PartialEq for QRep {
    fn eq(&self, other: &Self) -> bool {
        same_quiver(&self.quiver, &other.quiver) && self.dims == other.dims && self.mats == other.mats
    }
}

pub(crate) fn same_quiver(a: &Arc<Quiver>, b: &Arc<Quiver>) -> bool {
    Arc::ptr_eq(a, b) || a.vertices() == b.vertices() && a.arrows() == b.arrows()
}

impl QRep {
    pub fn new(quiver: Arc<Quiver>, dims: Vec<usize>, mats: Vec<Mat>) -> Result<Self, EngineError> {
        if dims.len() != quiver.len() || mats.len() != quiver.arrows().len() {
            return Err(EngineError::ShapeMismatch("dimension or matrix count".into()));
        }
        for (a, m) in quiver.arrows().iter().zip(&mats) {
            if m.rows() != dims[a.src] || m.cols() != dims[a.dst] {
                return Err(EngineError::ShapeMismatch(format!("matrix for arrow {}", a.id)));
            }
        }
        Ok(QRep { quiver, dims, mats })
    }

    pub fn zero(quiver: Arc<Quiver>) -> Self {
        let dims = vec![0; quiver.len()];
        let mats = quiver.arrows().iter().map(|_| Mat::zeros(0, 0)).collect();
        QRep { quiver, dims, mats }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> Vec<i128> {
        self.dims.iter().map(|&d| d as i128).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn mat(&self, arrow: usize) -> &Mat {
        &self.mats[arrow]
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    /// Reattaches a structurally equal quiver (after dualising twice).
    pub fn with_quiver(mut self, quiver: &Arc<Quiver>) -> Result<Self, EngineError> {
        if !same_quiver(&self.quiver, quiver) {
            return Err(EngineError::QuiverMismatch);
        }
        self.quiver = Arc::clone(quiver);
        Ok(self)
    }

    pub fn direct_sum(&self, other: &QRep) -> Result<QRep, EngineError> {
        check_same(self, other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| Mat::block(a, &Mat::zeros(a.rows(), b.cols()), &Mat::zeros(b.rows(), a.cols()), b))
            .collect();
        Ok(QRep {
            quiver: Arc::clone(&self.quiver),
            dims,
            mats,
        })
    }

    /// Vector-space dual, a representation of the opposite quiver.
    pub fn dual(&self) -> QRep {
        QRep {
            quiver: Arc::new(self.quiver.opposite()),
            dims: self.dims.clone(),
            mats: self.mats.iter().map(Mat::transpose).collect(),
        }
    }

    /// Restriction to a subrepresentation spanned by the given column bases.
    pub fn subrep(&self, bases: &[Mat]) -> Result<QRep, EngineError> {
        let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
        let mut mats = Vec::with_capacity(self.mats.len());
        for (a, m) in self.quiver.arrows().iter().zip(&self.mats) {
            let image = m.mul(&bases[a.dst]);
            let restricted = bases[a.src]
                .solve_matrix(&image)
                .ok_or_else(|| EngineError::NotAModuleMap("subspace is not a subrepresentation".into()))?;
            mats.push(restricted);
        }
        QRep::new(Arc::clone(&self.quiver), dims, mats)
    }

    /// Quotient by a subrepresentation spanned by the given column bases.
    pub fn quotient(&self, bases: &[Mat]) -> Result<QRep, EngineError> {
        let mut sections = Vec::with_capacity(self.dims.len());
        let mut projections = Vec::with_capacity(self.dims.len());
        for (v, basis) in bases.iter().enumerate() {
            let (section, projection) = complement(basis, self.dims[v]);
            sections.push(section);
            projections.push(projection);
        }
        let dims = sections.iter().map(Mat::cols).collect();
        let mats = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| projections[a.src].mul(m).mul(&sections[a.dst]))
            .collect();
        QRep::new(Arc::clone(&self.quiver), dims, mats)
    }
}

/// Complement of a column space inside `k^n`: returns a section `S`
/// (columns completing the basis) and the projection `π` onto it with
/// `π·S = I` and `π·basis = 0`.
fn complement(basis: &Mat, n: usize) -> (Mat, Mat) {
    let mut cols: Vec<Vec<Q>> = (0..basis.cols()).map(|c| basis.column(c)).collect();
    let k = cols.len();
    let mut extra = Vec::new();
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        let mut trial = cols.clone();
        trial.push(e.clone());
        if Mat::from_columns(n, &trial).rank() == trial.len() {
            cols.push(e.clone());
            extra.push(e);
        }
    }
    let full = Mat::from_columns(n, &cols);
    let inv = full.inverse().expect("completed basis is invertible");
    let m = extra.len();
    let mut projection = Mat::zeros(m, n);
    for r in 0..m {
        for c in 0..n {
            projection[(r, c)] = inv[(k + r, c)].clone();
        }
    }
    (Mat::from_columns(n, &extra), projection)
}

pub(crate) fn check_same(a: &QRep, b: &QRep) -> Result<(), EngineError> {
    if same_quiver(&a.quiver, &b.quiver) {
        Ok(())
    } else {
        Err(EngineError::QuiverMismatch)
    }
}

/// `P_x`: basis of `P_x(w)` are the paths `w ⇝ x`.
pub fn projective(q: &Arc<Quiver>, x: usize) -> Result<QRep, EngineError> {
    let paths = Paths::new(q)?;
    projective_with(q, &paths, x)
}

pub(crate) fn projective_with(q: &Arc<Quiver>, paths: &Paths, x: usize) -> Result<QRep, EngineError> {
    if x >= q.len() {
        return Err(EngineError::UnknownVertex(x.to_string()));
    }
    let dims: Vec<usize> = (0..q.len()).map(|w| paths.between(w, x).len()).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut m = Mat::zeros(dims[a.src], dims[a.dst]);
            for (c, p) in paths.between(a.dst, x).iter().enumerate() {
                let extended: Vec<usize> = std::iter::once(ai).chain(p.iter().copied()).collect();
                let r = paths.index(a.src, x, &extended).expect("extended path exists");
                m[(r, c)] = Q::one();
            }
            m
        })
        .collect();
    QRep::new(Arc::clone(q), dims, mats)
}

/// `I_x`: `I_x(w)` is dual to the paths `x ⇝ w`.
pub fn injective(q: &Arc<Quiver>, x: usize) -> Result<QRep, EngineError> {
    let paths = Paths::new(q)?;
    injective_with(q, &paths, x)
}

pub(crate) fn injective_with(q: &Arc<Quiver>, paths: &Paths, x: usize) -> Result<QRep, EngineError> {
    if x >= q.len() {
        return Err(EngineError::UnknownVertex(x.to_string()));
    }
    let dims: Vec<usize> = (0..q.len()).map(|w| paths.between(x, w).len()).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut m = Mat::zeros(dims[a.src], dims[a.dst]);
            for (r, p) in paths.between(x, a.src).iter().enumerate() {
                let extended: Vec<usize> = p.iter().copied().chain(std::iter::once(ai)).collect();
                let c = paths.index(x, a.dst, &extended).expect("extended path exists");
                m[(r, c)] = Q::one();
            }
            m
        })
        .collect();
    QRep::new(Arc::clone(q), dims, mats)
}

pub fn simple(q: &Arc<Quiver>, x: usize) -> Result<QRep, EngineError> {
    if x >= q.len() {
        return Err(EngineError::UnknownVertex(x.to_string()));
    }
    let dims: Vec<usize> = (0..q.len()).map(|w| usize::from(w == x)).collect();
    let mats = q.arrows().iter().map(|a| Mat::zeros(dims[a.src], dims[a.dst])).collect();
    QRep::new(Arc::clone(q), dims, mats)
}

/// A morphism of representations, one matrix `M(v) → N(v)` per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ModMap {
    pub src: QRep,
    pub dst: QRep,
    pub comps: Vec<Mat>,
}

impl ModMap {
    pub fn new(src: QRep, dst: QRep, comps: Vec<Mat>) -> Result<Self, EngineError> {
        check_same(&src, &dst)?;
        for (v, c) in comps.iter().enumerate() {
            if c.rows() != dst.dims[v] || c.cols() != src.dims[v] {
                return Err(EngineError::ShapeMismatch(format!("component at vertex {v}")));
            }
        }
        for (ai, a) in src.quiver.arrows().iter().enumerate() {
            if comps[a.src].mul(&src.mats[ai]) != dst.mats[ai].mul(&comps[a.dst]) {
                return Err(EngineError::NotAModuleMap(format!("fails to commute with arrow {}", a.id)));
            }
        }
        Ok(ModMap { src, dst, comps })
    }

    pub fn identity(m: &QRep) -> Self {
        ModMap {
            src: m.clone(),
            dst: m.clone(),
            comps: m.dims.iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    pub fn zero(src: &QRep, dst: &QRep) -> Self {
        ModMap {
            src: src.clone(),
            dst: dst.clone(),
            comps: src.dims.iter().zip(&dst.dims).map(|(&s, &d)| Mat::zeros(d, s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Mat::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.src.dims == self.dst.dims && self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn kernel(&self) -> Result<QRep, EngineError> {
        let bases: Vec<Mat> = self
            .comps
            .iter()
            .zip(&self.src.dims)
            .map(|(c, &n)| Mat::from_columns(n, &c.nullspace()))
            .collect();
        self.src.subrep(&bases)
    }

    pub fn image_bases(&self) -> Vec<Mat> {
        self.comps
            .iter()
            .zip(&self.dst.dims)
            .map(|(c, &n)| Mat::from_columns(n, &c.column_space()))
            .collect()
    }

    pub fn image(&self) -> Result<QRep, EngineError> {
        self.dst.subrep(&self.image_bases())
    }

    pub fn cokernel(&self) -> Result<QRep, EngineError> {
        self.dst.quotient(&self.image_bases())
    }
}

/// Linear system whose solutions are the morphisms `M → N`: one unknown per
/// entry of each `f_v`, one equation per entry of `f_u·M_α − N_α·f_v`.
/// Rows are indexed like `Hom(P_1, N)` of the standard resolution of `M`,
/// so the cokernel of this matrix is `Ext¹(M, N)`.
fn intertwiner_system(m: &QRep, n: &QRep) -> (Mat, Vec<usize>) {
    let q = &m.quiver;
    let mut offsets = Vec::with_capacity(q.len());
    let mut unknowns = 0;
    for v in 0..q.len() {
        offsets.push(unknowns);
        unknowns += n.dims[v] * m.dims[v];
    }
    let rows: usize = q.arrows().iter().map(|a| n.dims[a.src] * m.dims[a.dst]).sum();
    let mut sys = Mat::zeros(rows, unknowns);
    let mut row = 0;
    for (ai, a) in q.arrows().iter().enumerate() {
        let (u, v) = (a.src, a.dst);
        let (ma, na) = (&m.mats[ai], &n.mats[ai]);
        for i in 0..n.dims[u] {
            for j in 0..m.dims[v] {
                // Σ_k f_u[i,k]·M_α[k,j]
                for k in 0..m.dims[u] {
                    let coef = &ma[(k, j)];
                    if !coef.is_zero() {
                        sys[(row, offsets[u] + i * m.dims[u] + k)] += coef;
                    }
                }
                // − Σ_k N_α[i,k]·f_v[k,j]
                for k in 0..n.dims[v] {
                    let coef = &na[(i, k)];
                    if !coef.is_zero() {
                        sys[(row, offsets[v] + k * m.dims[v] + j)] -= coef;
                    }
                }
                row += 1;
            }
        }
    }
    (sys, offsets)
}

/// Basis of `Hom(M, N)`.
pub fn hom_space(m: &QRep, n: &QRep) -> Result<Vec<ModMap>, EngineError> {
    check_same(m, n)?;
    let (sys, offsets) = intertwiner_system(m, n);
    Ok(sys
        .nullspace()
        .into_iter()
        .map(|x| {
            let comps = (0..m.dims.len())
                .map(|v| {
                    let mut c = Mat::zeros(n.dims[v], m.dims[v]);
                    for i in 0..n.dims[v] {
                        for j in 0..m.dims[v] {
                            c[(i, j)] = x[offsets[v] + i * m.dims[v] + j].clone();
                        }
                    }
                    c
                })
                .collect();
            ModMap {
                src: m.clone(),
                dst: n.clone(),
                comps,
            }
        })
        .collect())
}

pub fn hom_dim(m: &QRep, n: &QRep) -> Result<usize, EngineError> {
    check_same(m, n)?;
    let (sys, _) = intertwiner_system(m, n);
    Ok(sys.cols() - sys.rank())
}

/// `⟨d₁, d₂⟩ = Σ_v d₁(v)d₂(v) − Σ_{α:u→v} d₁(v)d₂(u)`, which equals
/// `dim Hom − dim Ext¹` for representations with these dimension vectors.
pub fn euler_form(q: &Quiver, d1: &[i128], d2: &[i128]) -> i128 {
    let diag: i128 = d1.iter().zip(d2).map(|(a, b)| a * b).sum();
    let off: i128 = q.arrows().iter().map(|a| d1[a.dst] * d2[a.src]).sum();
    diag - off
}

/// `dim Ext¹(M, N) = dim Hom(M, N) − ⟨dim M, dim N⟩`.
pub fn ext_dim(m: &QRep, n: &QRep) -> Result<usize, EngineError> {
    let hom = hom_dim(m, n)? as i128;
    let ext = hom - euler_form(&m.quiver, &m.dim_vector(), &n.dim_vector());
    usize::try_from(ext).map_err(|_| EngineError::NegativeExt(ext))
}

/// Basis of cocycles `c_α: M(v) → N(u)` representing `Ext¹(M, N)`.
pub fn ext_cocycles(m: &QRep, n: &QRep) -> Result<Vec<Vec<Mat>>, EngineError> {
    check_same(m, n)?;
    let (sys, _) = intertwiner_system(m, n);
    let mut span: Vec<Vec<Q>> = sys.column_space();
    let rank = span.len();
    let mut chosen = Vec::new();
    for r in 0..sys.rows() {
        let mut e = vec![Q::zero(); sys.rows()];
        e[r] = Q::one();
        let mut trial = span.clone();
        trial.push(e.clone());
        if Mat::from_columns(sys.rows(), &trial).rank() == trial.len() {
            span.push(e);
            chosen.push(r);
        }
    }
    debug_assert_eq!(rank + chosen.len(), sys.rows());
    let q = &m.quiver;
    let mut row_arrow = Vec::with_capacity(sys.rows());
    for (ai, a) in q.arrows().iter().enumerate() {
        for i in 0..n.dims[a.src] {
            for j in 0..m.dims[a.dst] {
                row_arrow.push((ai, i, j));
            }
        }
    }
    Ok(chosen
        .into_iter()
        .map(|r| {
            let mut c: Vec<Mat> = q.arrows().iter().map(|a| Mat::zeros(n.dims[a.src], m.dims[a.dst])).collect();
            let (ai, i, j) = row_arrow[r];
            c[ai][(i, j)] = Q::one();
            c
        })
        .collect())
}

/// The middle term `E` of the extension `0 → N → E → M → 0` with cocycle
/// `c`: `E(v) = N(v) ⊕ M(v)` and `E_α = [[N_α, c_α], [0, M_α]]`.
pub fn extension(m: &QRep, n: &QRep, cocycle: &[Mat]) -> Result<QRep, EngineError> {
    check_same(m, n)?;
    let q = &m.quiver;
    let dims = n.dims.iter().zip(&m.dims).map(|(a, b)| a + b).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            Mat::block(
                &n.mats[ai],
                &cocycle[ai],
                &Mat::zeros(m.dims[a.src], n.dims[a.dst]),
                &m.mats[ai],
            )
        })
        .collect();
    QRep::new(Arc::clone(q), dims, mats)
}

/// `Ext¹(M, N)` through the standard projective resolution
/// `0 → ⊕_{α:u→v} P_u ⊗ M(v) → ⊕_x P_x ⊗ M(x) → M → 0`: the Hom spaces out
/// of the projective terms are solved as intertwiner systems against
/// explicit projectives, then
/// `ext = hom(P₁, N) − hom(P₀, N) + hom(M, N)`.
pub fn ext_dim_by_resolution(m: &QRep, n: &QRep) -> Result<usize, EngineError> {
    check_same(m, n)?;
    let q = &m.quiver;
    let paths = Paths::new(q)?;
    let mut hom_p = Vec::with_capacity(q.len());
    for x in 0..q.len() {
        hom_p.push(hom_dim(&projective_with(q, &paths, x)?, n)? as i128);
    }
    let p0: i128 = (0..q.len()).map(|x| m.dims[x] as i128 * hom_p[x]).sum();
    let p1: i128 = q.arrows().iter().map(|a| m.dims[a.dst] as i128 * hom_p[a.src]).sum();
    let ext = p1 - p0 + hom_dim(m, n)? as i128;
    usize::try_from(ext).map_err(|_| EngineError::NegativeExt(ext))
}

/// `Ext¹(M, N) ≅ D Hom(N, τM)`.
pub fn ext_dim_by_ar(m: &QRep, n: &QRep) -> Result<usize, EngineError> {
    hom_dim(n, &tau(m)?)
}

/// Auslander–Reiten translate of a module, as the kernel of `ν(d)` for the
/// standard resolution `d`. Zero exactly when every summand is projective.
pub fn tau(m: &QRep) -> Result<QRep, EngineError> {
    let q = &m.quiver;
    let paths = Paths::new(q)?;
    let arrows = q.arrows();
    let inj: Vec<QRep> = (0..q.len()).map(|x| injective_with(q, &paths, x)).collect::<Result<_, _>>()?;

    // νP₁ = ⊕_{α:u→v} I_u^{dim M(v)},  νP₀ = ⊕_x I_x^{dim M(x)}
    let p1: Vec<(usize, usize)> = arrows
        .iter()
        .enumerate()
        .flat_map(|(ai, a)| (0..m.dims[a.dst]).map(move |j| (ai, j)))
        .collect();
    let p0: Vec<(usize, usize)> = (0..q.len()).flat_map(|x| (0..m.dims[x]).map(move |i| (x, i))).collect();
    let src = direct_sum_all(q, p1.iter().map(|&(ai, _)| &inj[arrows[ai].src]))?;
    let dst = direct_sum_all(q, p0.iter().map(|&(x, _)| &inj[x]))?;

    let mut comps = Vec::with_capacity(q.len());
    for w in 0..q.len() {
        let mut off0 = HashMap::new();
        let mut acc = 0;
        for &(x, i) in &p0 {
            off0.insert((x, i), acc);
            acc += paths.between(x, w).len();
        }
        let mut f = Mat::zeros(dst.dims[w], src.dims[w]);
        let mut col0 = 0;
        for &(ai, j) in &p1 {
            let (u, v) = (arrows[ai].src, arrows[ai].dst);
            // ν(α): I_u → I_v on the copy indexed by the basis vector j of M(v).
            let row0 = off0[&(v, j)];
            for (r, path) in paths.between(v, w).iter().enumerate() {
                let through: Vec<usize> = std::iter::once(ai).chain(path.iter().copied()).collect();
                let c = paths.index(u, w, &through).expect("path through α exists");
                f[(row0 + r, col0 + c)] += Q::one();
            }
            // −ν(e_u) ⊗ M_α into the copies of I_u indexed by M(u).
            let width = paths.between(u, w).len();
            for i in 0..m.dims[u] {
                let coef = &m.mats[ai][(i, j)];
                if coef.is_zero() {
                    continue;
                }
                let row0 = off0[&(u, i)];
                for t in 0..width {
                    f[(row0 + t, col0 + t)] -= coef;
                }
            }
            col0 += width;
        }
        comps.push(f);
    }
    let map = ModMap::new(src, dst, comps)?;
    map.kernel()
}

/// Inverse translate `τ⁻¹ = D τ_{Q^op} D`.
pub fn tau_inv(m: &QRep) -> Result<QRep, EngineError> {
    let quiver = Arc::clone(&m.quiver);
    tau(&m.dual())?.dual().with_quiver(&quiver)
}

pub(crate) fn direct_sum_all<'a>(q: &Arc<Quiver>, parts: impl Iterator<Item = &'a QRep>) -> Result<QRep, EngineError> {
    let parts: Vec<&QRep> = parts.collect();
    let dims: Vec<usize> = (0..q.len()).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let mut mats: Vec<Mat> = q.arrows().iter().map(|a| Mat::zeros(dims[a.src], dims[a.dst])).collect();
    let mut offsets = vec![0usize; q.len()];
    for p in parts {
        for (ai, a) in q.arrows().iter().enumerate() {
            let block = &p.mats[ai];
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    mats[ai][(offsets[a.src] + r, offsets[a.dst] + c)] = block[(r, c)].clone();
                }
            }
        }
        for v in 0..q.len() {
            offsets[v] += p.dims[v];
        }
    }
    QRep::new(Arc::clone(q), dims, mats)
}
