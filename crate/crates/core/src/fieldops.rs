//! Field operators on the truncated coincidence Fock space.
//!
//! Sectors are always the canonical index sets `{1, ..., n}`. Creation adds
//! the fresh indices `K = {n+1, ..., n+k}`; annihilation removes the last `k`
//! indices. Operators act on the component form ([`ComponentVector`]):
//!
//! * `φ_-^k(x)` reads the component `Q ∪ {K}` with the block `K` pinned at `x`,
//!   times `sqrt(n!/(n-k)!)`.
//! * `φ_+^k(x)` writes, for every block `B` of size `k` of an output
//!   partition, the input component `P \ B` with `B` pinned at `x`, times
//!   `k! sqrt(n!/(n+k)!)`.
//! * `ψ_+^k(x)` does the same for the single block `K` only, times
//!   `sqrt((n+k)!/n!)`; symmetrizing it gives `φ_+^k(x)` on symmetric inputs.
//!
//! Pointwise operators at site `x` are the smeared ones with `f = e_x`;
//! lattice sums use unit weight. The creation operators and the interaction
//! operators expect symmetric inputs, which is the domain they are defined on.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::IndexSet;
use crate::scalar::{cabs, czero, factorial, falling, Cplx, Real};
use crate::space::{ComponentVector, FockSpace, FockVector, Lattice, SectorSpace};

/// A one-particle function `f ∈ ℓ²(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Smearing<T: Real> {
    lattice: Lattice,
    values: Vec<Cplx<T>>,
}

impl<T: Real> Smearing<T> {
    pub fn new(lattice: Lattice, values: Vec<Cplx<T>>) -> Result<Self> {
        if values.len() != lattice.sites() {
            return Err(Error::SpaceMismatch);
        }
        Ok(Smearing { lattice, values })
    }

    /// The unit vector `e_x`.
    pub fn point(lattice: Lattice, x: usize) -> Result<Self> {
        if x >= lattice.sites() {
            return Err(Error::BadParameter(format!(
                "site {x} outside a lattice of {} sites",
                lattice.sites()
            )));
        }
        let mut values = vec![czero(); lattice.sites()];
        values[x] = Cplx::new(T::one(), T::zero());
        Ok(Smearing { lattice, values })
    }

    pub fn random<R: Rng + ?Sized>(lattice: Lattice, rng: &mut R) -> Self {
        let values = (0..lattice.sites())
            .map(|_| {
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                Cplx::new(T::lit(re), T::lit(im))
            })
            .collect();
        Smearing { lattice, values }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Smearing {
            lattice: self.lattice,
            values: self.values.iter().map(|v| v / n).collect(),
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a + v.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `⟨f|g⟩ = Σ_x conj(f(x)) g(x)`.
    pub fn inner_product(&self, other: &Self) -> Cplx<T> {
        self.values
            .iter()
            .zip(&other.values)
            .fold(czero(), |a, (f, g)| a + f.conj() * g)
    }

    fn conjugated(&self) -> Vec<Cplx<T>> {
        self.values.iter().map(|v| v.conj()).collect()
    }
}

/// Which field operator a matrix or sweep refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    /// `φ_-^k`
    Annihilate,
    /// `φ_+^k`
    Create,
    /// `ψ_+^k`
    CreateUnsym,
}

/// Renumbers block labels in order of first appearance.
fn canonical_rgs(labels: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .into_iter()
        .map(|l| match seen.iter().position(|&s| s == l) {
            Some(p) => p,
            None => {
                seen.push(l);
                seen.len() - 1
            }
        })
        .collect()
}

fn canonical_sector(lattice: Lattice, n: usize) -> Result<Arc<SectorSpace>> {
    SectorSpace::canonical(lattice, n)
}

fn check_canonical(v: &ComponentVector<impl Real>) -> Result<()> {
    if v.space().indices() != &IndexSet::range(v.space().n()) {
        return Err(Error::InvalidIndexSet(format!(
            "field operators act on canonical sectors, got {}",
            v.space().indices()
        )));
    }
    Ok(())
}

fn check_lattice<T: Real>(f: &Smearing<T>, v: &ComponentVector<T>) -> Result<()> {
    if f.lattice() != v.space().lattice() {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// `φ_-^k(f) Ψ_n = Σ_x conj(f(x)) φ_-^k(x) Ψ_n`, in sector `n - k`.
/// For `k > n` the result is the zero vector of the vacuum sector.
pub fn annihilate<T: Real>(
    k: usize,
    f: &Smearing<T>,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    check_canonical(src)?;
    check_lattice(f, src)?;
    let space = src.space();
    let (n, lattice) = (space.n(), space.lattice());
    if k > n {
        return Ok(ComponentVector::zeros(&canonical_sector(lattice, 0)?));
    }
    let target = canonical_sector(lattice, n - k)?;
    let coeff = f.conjugated();
    let scale = falling::<T>(n, n - k).sqrt();
    let l = lattice.sites();
    let mut out = ComponentVector::zeros(&target);
    let amps = out.amplitudes_mut();
    for (qid, q) in target.partitions().iter().enumerate() {
        // Q ∪ {K}: K = {n-k+1, ..., n} is the last block
        let nq = q.len();
        let mut rgs = q.rgs();
        rgs.extend(std::iter::repeat_n(nq, k));
        let sid = space.partition_id_by_rgs(&rgs);
        let base = space.component_range(sid).start;
        for (local, a) in amps[target.component_range(qid)].iter_mut().enumerate() {
            let mut acc = czero();
            for (x, c) in coeff.iter().enumerate() {
                acc += c * src.amplitudes()[base + local * l + x];
            }
            *a = acc * scale;
        }
    }
    Ok(out)
}

/// `φ_+^k(f) Ψ_n = Σ_x f(x) φ_+^k(x) Ψ_n`, in sector `n + k`.
pub fn create<T: Real>(
    k: usize,
    f: &Smearing<T>,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    check_canonical(src)?;
    check_lattice(f, src)?;
    if k == 0 {
        return Err(Error::BadParameter("k must be at least 1".into()));
    }
    let space = src.space();
    let (n, lattice) = (space.n(), space.lattice());
    let m = n + k;
    let target = canonical_sector(lattice, m)?;
    let scale = factorial::<T>(k) * (T::one() / falling::<T>(m, n)).sqrt();
    let mut out = ComponentVector::zeros(&target);
    let amps = out.amplitudes_mut();
    for (pid, p) in target.partitions().iter().enumerate() {
        let rgs = p.rgs();
        for (b, block) in p.blocks().iter().enumerate() {
            if block.len() != k {
                continue;
            }
            let rest = canonical_rgs(rgs.iter().copied().filter(|&r| r != b));
            let sid = space.partition_id_by_rgs(&rest);
            for idx in target.component_range(pid) {
                let (_, v) = target.component_element(idx);
                let w: Vec<usize> = v
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != b)
                    .map(|(_, &s)| s)
                    .collect();
                amps[idx] +=
                    f.values[v[b]] * src.amplitudes()[space.component_index(sid, &w)] * scale;
            }
        }
    }
    Ok(out)
}

/// `ψ_+^k(f) Ψ_n`: creation into the fresh block `K = {n+1, ..., n+k}` only.
pub fn create_unsym<T: Real>(
    k: usize,
    f: &Smearing<T>,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    check_canonical(src)?;
    check_lattice(f, src)?;
    if k == 0 {
        return Err(Error::BadParameter("k must be at least 1".into()));
    }
    let space = src.space();
    let (n, lattice) = (space.n(), space.lattice());
    let target = canonical_sector(lattice, n + k)?;
    let scale = falling::<T>(n + k, n).sqrt();
    let l = lattice.sites();
    let mut out = ComponentVector::zeros(&target);
    let amps = out.amplitudes_mut();
    for (qid, q) in space.partitions().iter().enumerate() {
        let mut rgs = q.rgs();
        rgs.extend(std::iter::repeat_n(q.len(), k));
        let pid = target.partition_id_by_rgs(&rgs);
        let base = target.component_range(pid).start;
        for (local, a) in src.amplitudes()[space.component_range(qid)].iter().enumerate() {
            for (x, fx) in f.values.iter().enumerate() {
                amps[base + local * l + x] = fx * a * scale;
            }
        }
    }
    Ok(out)
}

/// Dispatches on [`FieldKind`].
pub fn apply_field<T: Real>(
    kind: FieldKind,
    k: usize,
    f: &Smearing<T>,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    match kind {
        FieldKind::Annihilate => annihilate(k, f, src),
        FieldKind::Create => create(k, f, src),
        FieldKind::CreateUnsym => create_unsym(k, f, src),
    }
}

/// `H^h_k Ψ_n` from its closed form: for every block `H` of size `h` of an
/// output partition, the input is read at component
/// `(P \ H) ∪ {K}` with `K` carrying the site of `H`, times `h! sqrt(n!/m!)`.
/// The output lives in sector `m = n - k + h`; for `k > n` it is zero.
pub fn interaction_direct<T: Real>(
    h: usize,
    k: usize,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    check_canonical(src)?;
    if h == 0 || k == 0 {
        return Err(Error::BadParameter("h and k must be at least 1".into()));
    }
    let space = src.space();
    let (n, lattice) = (space.n(), space.lattice());
    let m = (n + h).saturating_sub(k);
    let target = canonical_sector(lattice, m)?;
    let mut out = ComponentVector::zeros(&target);
    if k > n {
        return Ok(out);
    }
    let scale = factorial::<T>(h) * (falling::<T>(n, 0) / falling::<T>(m, 0)).sqrt();
    let amps = out.amplitudes_mut();
    for (pid, p) in target.partitions().iter().enumerate() {
        let rgs = p.rgs();
        for (b, block) in p.blocks().iter().enumerate() {
            if block.len() != h {
                continue;
            }
            let mut src_rgs = canonical_rgs(rgs.iter().copied().filter(|&r| r != b));
            let nblocks = p.len() - 1;
            src_rgs.extend(std::iter::repeat_n(nblocks, k));
            let sid = space.partition_id_by_rgs(&src_rgs);
            for idx in target.component_range(pid) {
                let (_, v) = target.component_element(idx);
                let mut w: Vec<usize> = v
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != b)
                    .map(|(_, &s)| s)
                    .collect();
                w.push(v[b]);
                amps[idx] += src.amplitudes()[space.component_index(sid, &w)] * scale;
            }
        }
    }
    Ok(out)
}

/// `G^h_k Ψ_n = Σ_x ψ_+^h(x) φ_-^k(x) Ψ_n`.
pub fn interaction_unsym<T: Real>(
    h: usize,
    k: usize,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    let lattice = src.space().lattice();
    let n = src.space().n();
    let m = (n + h).saturating_sub(k);
    let mut acc = ComponentVector::zeros(&canonical_sector(lattice, m)?);
    if k > n {
        return Ok(acc);
    }
    for x in 0..lattice.sites() {
        let e = Smearing::point(lattice, x)?;
        acc = acc.add(&create_unsym(h, &e, &annihilate(k, &e, src)?)?)?;
    }
    Ok(acc)
}

/// `H^h_k Ψ_n = S G^h_k Ψ_n`, built from the pointwise operators.
pub fn interaction_composed<T: Real>(
    h: usize,
    k: usize,
    src: &ComponentVector<T>,
) -> Result<ComponentVector<T>> {
    Ok(interaction_unsym(h, k, src)?.symmetrize())
}

/// A dense matrix between two sectors, in their component bases.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<T: Real> {
    domain: Arc<SectorSpace>,
    codomain: Arc<SectorSpace>,
    entries: DMatrix<Cplx<T>>,
}

impl<T: Real> OperatorMatrix<T> {
    /// Materializes a linear map column by column.
    pub fn from_linear_map(
        domain: &Arc<SectorSpace>,
        codomain: &Arc<SectorSpace>,
        mut map: impl FnMut(&ComponentVector<T>) -> Result<ComponentVector<T>>,
    ) -> Result<Self> {
        let (rows, cols) = (codomain.component_dim(), domain.component_dim());
        let mut entries = DMatrix::from_element(rows, cols, czero());
        let mut unit = ComponentVector::zeros(domain);
        for c in 0..cols {
            unit.amplitudes_mut()[c] = Cplx::new(T::one(), T::zero());
            let image = map(&unit)?;
            if image.space().n() != codomain.n() || image.space().lattice() != codomain.lattice()
            {
                return Err(Error::SpaceMismatch);
            }
            for (r, a) in image.amplitudes().iter().enumerate() {
                entries[(r, c)] = *a;
            }
            unit.amplitudes_mut()[c] = czero();
        }
        Ok(OperatorMatrix {
            domain: domain.clone(),
            codomain: codomain.clone(),
            entries,
        })
    }

    /// Matrix of a smeared field operator on sector `n`.
    pub fn field(kind: FieldKind, k: usize, f: &Smearing<T>, n: usize) -> Result<Self> {
        let lattice = f.lattice();
        let domain = canonical_sector(lattice, n)?;
        let m = match kind {
            FieldKind::Annihilate => n.checked_sub(k).unwrap_or(0),
            _ => n + k,
        };
        let codomain = canonical_sector(lattice, m)?;
        Self::from_linear_map(&domain, &codomain, |v| apply_field(kind, k, f, v))
    }

    /// Matrix of `H^h_k` on sector `n`, from the closed form.
    pub fn interaction(lattice: Lattice, h: usize, k: usize, n: usize) -> Result<Self> {
        let domain = canonical_sector(lattice, n)?;
        let codomain = canonical_sector(lattice, (n + h).saturating_sub(k))?;
        Self::from_linear_map(&domain, &codomain, |v| interaction_direct(h, k, v))
    }

    pub fn domain(&self) -> &Arc<SectorSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SectorSpace> {
        &self.codomain
    }

    pub fn entries(&self) -> &DMatrix<Cplx<T>> {
        &self.entries
    }

    /// Adjoint with respect to the inner products of domain and codomain.
    /// The component form carries unit weights, so this is the conjugate
    /// transpose.
    pub fn adjoint_weighted(&self) -> Self {
        OperatorMatrix {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries: self.entries.adjoint(),
        }
    }

    /// Product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.domain.n() != other.codomain.n() || self.domain.lattice() != other.codomain.lattice()
        {
            return Err(Error::SpaceMismatch);
        }
        Ok(OperatorMatrix {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    /// Compression `B_cod^† A B_dom` to the symmetric subspaces, in
    /// orbit-indicator coordinates.
    pub fn symmetric_restriction(&self) -> DMatrix<Cplx<T>> {
        let bd = self.domain.symmetric_basis::<T>();
        let bc = self.codomain.symmetric_basis::<T>();
        bc.adjoint() * &self.entries * bd
    }

    /// Singular values of the symmetric restriction, in descending order.
    pub fn symmetric_singular_values(&self) -> Vec<T> {
        singular_values(&self.symmetric_restriction())
    }

    /// Singular values on the full component space, in descending order.
    pub fn singular_values(&self) -> Vec<T> {
        singular_values(&self.entries)
    }

    /// CSV rows `row,col,re,im` for the nonzero entries.
    pub fn to_csv(&self) -> String {
        matrix_csv(&self.entries)
    }
}

/// Singular values in descending order; empty matrices have none.
pub fn singular_values<T: Real>(m: &DMatrix<Cplx<T>>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<T> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Frobenius norm of a complex matrix.
pub fn frobenius<T: Real>(m: &DMatrix<Cplx<T>>) -> T {
    m.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
}

/// CSV rows `row,col,re,im` for the nonzero entries of a matrix.
pub fn matrix_csv<T: Real>(m: &DMatrix<Cplx<T>>) -> String {
    let mut out = String::from("row,col,re,im\n");
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let z = m[(r, c)];
            if z.re != T::zero() || z.im != T::zero() {
                let _ = writeln!(
                    out,
                    "{r},{c},{:e},{:e}",
                    z.re.to_f64_lossy(),
                    z.im.to_f64_lossy()
                );
            }
        }
    }
    out
}

fn fock_apply<T: Real>(
    v: &FockVector<T>,
    shift: isize,
    mut op: impl FnMut(&ComponentVector<T>) -> Result<ComponentVector<T>>,
) -> Result<FockVector<T>> {
    let space = v.space();
    let mut out = FockVector::zeros(space);
    for (n, sector) in v.sectors().iter().enumerate() {
        let m = n as isize + shift;
        if m < 0 || sector.is_zero() {
            continue;
        }
        let m = m as usize;
        if m > space.n_max() {
            return Err(Error::TruncationExceeded(m, space.n_max()));
        }
        let image = op(sector)?;
        let acc = out.sector(m).add(&image)?;
        *out.sector_mut(m) = acc;
    }
    Ok(out)
}

/// `φ_-^k(f)` on a Fock vector.
pub fn annihilate_fock<T: Real>(
    k: usize,
    f: &Smearing<T>,
    v: &FockVector<T>,
) -> Result<FockVector<T>> {
    fock_apply(v, -(k as isize), |s| annihilate(k, f, s))
}

/// `φ_+^k(f)` on a Fock vector; fails if a nonzero sector would leave the
/// truncation.
pub fn create_fock<T: Real>(k: usize, f: &Smearing<T>, v: &FockVector<T>) -> Result<FockVector<T>> {
    fock_apply(v, k as isize, |s| create(k, f, s))
}

/// `φ^k(f) = φ_+^k(f) + φ_-^k(f)` on a Fock vector.
pub fn field_fock<T: Real>(k: usize, f: &Smearing<T>, v: &FockVector<T>) -> Result<FockVector<T>> {
    create_fock(k, f, v)?.add(&annihilate_fock(k, f, v)?)
}

/// `H^h_k` on a Fock vector.
pub fn interaction_fock<T: Real>(h: usize, k: usize, v: &FockVector<T>) -> Result<FockVector<T>> {
    fock_apply(v, h as isize - k as isize, |s| interaction_direct(h, k, s))
}

/// A matrix on the symmetric subspace of the truncated Fock space, in
/// orbit-indicator coordinates, sector by sector.
#[derive(Clone, Debug)]
pub struct FockMatrix<T: Real> {
    space: Arc<FockSpace>,
    offsets: Vec<usize>,
    entries: DMatrix<Cplx<T>>,
}

impl<T: Real> FockMatrix<T> {
    pub fn zeros(space: &Arc<FockSpace>) -> Self {
        let mut offsets = vec![0];
        for s in space.sectors() {
            offsets.push(offsets.last().unwrap() + s.symmetric_orbits().len());
        }
        let dim = *offsets.last().unwrap();
        FockMatrix {
            space: space.clone(),
            offsets,
            entries: DMatrix::from_element(dim, dim, czero()),
        }
    }

    /// Adds the compression of a sector map `n -> m` for every `n` where
    /// both sectors lie inside the truncation. Outputs leaving the truncation
    /// are dropped.
    pub fn add_sector_map(
        &mut self,
        coupling: Cplx<T>,
        shift: isize,
        mut op: impl FnMut(&ComponentVector<T>) -> Result<ComponentVector<T>>,
    ) -> Result<()> {
        for n in 0..=self.space.n_max() {
            let m = n as isize + shift;
            if m < 0 || m as usize > self.space.n_max() {
                continue;
            }
            let m = m as usize;
            let dom = self.space.sector(n)?.clone();
            let cod = self.space.sector(m)?.clone();
            let bd = dom.symmetric_basis::<T>();
            let bc = cod.symmetric_basis::<T>();
            for col in 0..bd.ncols() {
                let v = ComponentVector::from_amplitudes(&dom, bd.column(col).iter().copied().collect())?;
                let image = op(&v)?;
                if image.space().n() != m {
                    continue;
                }
                let proj = bc.adjoint() * nalgebra::DVector::from_column_slice(image.amplitudes());
                for (r, z) in proj.iter().enumerate() {
                    self.entries[(self.offsets[m] + r, self.offsets[n] + col)] += coupling * z;
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<Cplx<T>> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Symmetric-coordinate range of sector `n`.
    pub fn sector_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Block `n -> m`.
    pub fn block(&self, m: usize, n: usize) -> DMatrix<Cplx<T>> {
        let (r, c) = (self.sector_range(m), self.sector_range(n));
        self.entries.view((r.start, c.start), (r.len(), c.len())).into_owned()
    }

    /// `‖A − A^†‖_F`.
    pub fn self_adjointness_residual(&self) -> T {
        frobenius(&(&self.entries - self.entries.adjoint()))
    }

    /// Largest entry outside the blocks `n -> n + s` for `s` in `shifts`.
    pub fn off_band(&self, shifts: &[isize]) -> T {
        let mut worst = T::zero();
        for n in 0..=self.space.n_max() {
            for m in 0..=self.space.n_max() {
                if shifts.contains(&(m as isize - n as isize)) {
                    continue;
                }
                worst = self.block(m, n).iter().fold(worst, |w, z| w.max(cabs(*z)));
            }
        }
        worst
    }

    pub fn to_csv(&self) -> String {
        matrix_csv(&self.entries)
    }
}

/// One term `coupling · (H^h_k + H^k_h)` of an interaction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingTerm {
    pub h: usize,
    pub k: usize,
    pub coupling: f64,
}

/// A list of interaction terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    terms: Vec<CouplingTerm>,
}

impl CouplingSpec {
    pub fn new(terms: Vec<CouplingTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.h == 0 || t.k == 0) {
            return Err(Error::BadParameter(format!(
                "interaction orders must be at least 1, got h={} k={}",
                t.h, t.k
            )));
        }
        Ok(CouplingSpec { terms })
    }

    /// `e (H²_1 + H¹_2)`.
    pub fn pair_creation(e: f64) -> Self {
        CouplingSpec {
            terms: vec![CouplingTerm { h: 2, k: 1, coupling: e }],
        }
    }

    pub fn terms(&self) -> &[CouplingTerm] {
        &self.terms
    }
}

/// `H_I = Σ coupling · (H^h_k + H^k_h)`, compressed to the truncation.
pub fn build_interaction_hamiltonian<T: Real>(
    space: &Arc<FockSpace>,
    spec: &CouplingSpec,
) -> Result<FockMatrix<T>> {
    let mut out = FockMatrix::zeros(space);
    for t in spec.terms() {
        let e = Cplx::new(T::lit(t.coupling), T::zero());
        let (h, k) = (t.h, t.k);
        out.add_sector_map(e, h as isize - k as isize, |v| interaction_direct(h, k, v))?;
        out.add_sector_map(e, k as isize - h as isize, |v| interaction_direct(k, h, v))?;
    }
    Ok(out)
}

/// Compression of `φ^k(f)` to the truncated symmetric Fock space.
pub fn field_matrix<T: Real>(
    space: &Arc<FockSpace>,
    k: usize,
    f: &Smearing<T>,
) -> Result<FockMatrix<T>> {
    let one = Cplx::new(T::one(), T::zero());
    let mut out = FockMatrix::zeros(space);
    out.add_sector_map(one, k as isize, |v| create(k, f, v))?;
    out.add_sector_map(one, -(k as isize), |v| annihilate(k, f, v))?;
    Ok(out)
}

/// Residuals of the canonical commutation relations on the sectors where
/// both orderings stay inside the truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorResidual<T> {
    /// `‖[φ_-^k(f), φ_+^h(g)] − δ_kh h! ⟨f|g⟩ I‖_F`
    pub mixed: T,
    /// `‖[φ_-^k(f), φ_-^h(g)]‖_F`
    pub annihilators: T,
    /// `‖[φ_+^k(f), φ_+^h(g)]‖_F`
    pub creators: T,
    /// `δ_kh h! ⟨f|g⟩`
    pub constant: Cplx<T>,
}

fn sector_commutator<T: Real>(
    a: (FieldKind, usize, &Smearing<T>),
    b: (FieldKind, usize, &Smearing<T>),
    n: usize,
) -> Result<DMatrix<Cplx<T>>> {
    let shift = |kind: FieldKind, k: usize, n: usize| match kind {
        FieldKind::Annihilate => n - k,
        _ => n + k,
    };
    let b_first = OperatorMatrix::field(b.0, b.1, b.2, n)?;
    let ab = OperatorMatrix::field(a.0, a.1, a.2, shift(b.0, b.1, n))?.compose(&b_first)?;
    let a_first = OperatorMatrix::field(a.0, a.1, a.2, n)?;
    let ba = OperatorMatrix::field(b.0, b.1, b.2, shift(a.0, a.1, n))?.compose(&a_first)?;
    // both products map symmetric vectors to symmetric vectors
    let diff = OperatorMatrix {
        domain: ab.domain.clone(),
        codomain: ab.codomain.clone(),
        entries: ab.entries - ba.entries,
    };
    Ok(diff.symmetric_restriction())
}

/// Checks `[φ_-^k(f), φ_+^h(g)] = δ_kh h! ⟨f|g⟩`, `[φ_-, φ_-] = 0` and
/// `[φ_+, φ_+] = 0` on the symmetric subspace of every sector where the
/// products are defined without leaving the truncation.
pub fn commutator_check<T: Real>(
    space: &FockSpace,
    k: usize,
    h: usize,
    f: &Smearing<T>,
    g: &Smearing<T>,
) -> Result<CommutatorResidual<T>> {
    let n_max = space.n_max();
    if k + h > n_max {
        return Err(Error::TruncationExceeded(k + h, n_max));
    }
    let constant = if k == h {
        f.inner_product(g) * factorial::<T>(h)
    } else {
        czero()
    };
    let mut mixed = T::zero();
    let mut annihilators = T::zero();
    let mut creators = T::zero();
    for n in 0..=n_max {
        if n + h <= n_max && n + h >= k && n >= k {
            let mut c = sector_commutator(
                (FieldKind::Annihilate, k, f),
                (FieldKind::Create, h, g),
                n,
            )?;
            if k == h {
                for i in 0..c.nrows() {
                    c[(i, i)] -= constant;
                }
            }
            mixed = mixed.hypot(frobenius(&c));
        }
        if n >= k + h {
            let c = sector_commutator(
                (FieldKind::Annihilate, k, f),
                (FieldKind::Annihilate, h, g),
                n,
            )?;
            annihilators = annihilators.hypot(frobenius(&c));
        }
        if n + k + h <= n_max {
            let c = sector_commutator((FieldKind::Create, k, f), (FieldKind::Create, h, g), n)?;
            creators = creators.hypot(frobenius(&c));
        }
    }
    Ok(CommutatorResidual {
        mixed,
        annihilators,
        creators,
        constant,
    })
}

/// Outcome of the vacuum cyclicity probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub rank: usize,
    pub full_dimension: usize,
    /// Dimension reached after each round of applying every generator.
    pub rank_by_round: Vec<usize>,
}

impl CyclicityReport {
    pub fn is_cyclic(&self) -> bool {
        self.rank == self.full_dimension
    }
}

fn orthonormalize_into<T: Real>(
    basis: &mut Vec<nalgebra::DVector<Cplx<T>>>,
    mut v: nalgebra::DVector<Cplx<T>>,
    tol: T,
) -> bool {
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dotc(&v);
            v -= b * c;
        }
    }
    let n = v.norm();
    if n > tol {
        basis.push(v / Cplx::new(n, T::zero()));
        true
    } else {
        false
    }
}

/// Span of all words in the compressed `φ^k(e_x)` (`k ≤ k_max`, every site)
/// applied to the vacuum, inside the truncated symmetric Fock space.
pub fn vacuum_cyclicity<T: Real>(space: &Arc<FockSpace>, k_max: usize) -> Result<CyclicityReport> {
    let lattice = space.lattice();
    let mut generators = Vec::new();
    for k in 1..=k_max {
        for x in 0..lattice.sites() {
            generators.push(field_matrix::<T>(space, k, &Smearing::point(lattice, x)?)?);
        }
    }
    let full_dimension = FockMatrix::<T>::zeros(space).dim();
    let tol = T::lit(1e-9);
    let mut vac = nalgebra::DVector::from_element(full_dimension, czero());
    vac[0] = Cplx::new(T::one(), T::zero());
    let mut basis = Vec::new();
    orthonormalize_into(&mut basis, vac, tol);
    let mut frontier = basis.clone();
    let mut rank_by_round = vec![basis.len()];
    while !frontier.is_empty() && basis.len() < full_dimension {
        let mut next = Vec::new();
        for v in &frontier {
            for g in &generators {
                let w = g.entries() * v;
                if orthonormalize_into(&mut basis, w, tol) {
                    next.push(basis.last().unwrap().clone());
                }
            }
        }
        frontier = next;
        rank_by_round.push(basis.len());
    }
    Ok(CyclicityReport {
        rank: basis.len(),
        full_dimension,
        rank_by_round,
    })
}
