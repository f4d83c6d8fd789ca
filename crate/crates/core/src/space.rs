//! Coincidence-product sectors over a finite lattice.
//!
//! A sector over index set `N` has two faces:
//!
//! * [`WeightedVector`]: one amplitude per configuration `x ∈ X^N`, with
//!   inner product `Σ_x w(x) conj(a(x)) b(x)` where `w(x)` counts the
//!   coincidence planes through `x`.
//! * [`ComponentVector`]: the direct-sum form `⊕_P ℓ²(C_P)`, one independent
//!   function of the block sites for every partition `P`, unit cell weight.
//!
//! Every weighted vector embeds isometrically into the component form by
//! restricting it to each plane ([`WeightedVector::decompose`]). The field
//! operators act on the component form, whose components are independent:
//! a vector supported on the diagonal component of `X^2` carries no amplitude
//! in the regular component.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::partitions::{
    enumerate_partitions, equality_pattern, indicator_b, membership_c, Config, IndexSet,
    Partition, Permutation, Permute,
};
use crate::scalar::{cabs, czero, Cplx, Real};

/// Upper bound on the number of amplitudes stored for one sector.
pub const MAX_SECTOR_DIM: usize = 1 << 20;

/// Default truncation level of the Fock space.
pub const DEFAULT_N_MAX: usize = 4;

/// A finite set of `L >= 1` sites with counting measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    sites: usize,
}

impl Lattice {
    pub fn new(sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::BadParameter("lattice needs at least one site".into()));
        }
        Ok(Lattice { sites })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }
}

/// Layout of one sector: configurations, weights and components.
#[derive(Debug)]
pub struct SectorSpace {
    lattice: Lattice,
    indices: IndexSet,
    partitions: Vec<Partition>,
    rgs_lookup: HashMap<Vec<usize>, usize>,
    offsets: Vec<usize>,
    weights: Vec<u64>,
    patterns: Vec<usize>,
    symmetry_maps: OnceLock<Vec<Vec<usize>>>,
}

type SectorCache = Mutex<HashMap<(Lattice, IndexSet), Arc<SectorSpace>>>;

fn sector_cache() -> &'static SectorCache {
    static CACHE: OnceLock<SectorCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

fn mixed_radix(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

fn digits_of(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for p in (0..len).rev() {
        out[p] = index % base;
        index /= base;
    }
    out
}

impl SectorSpace {
    /// Sector over `indices`. Spaces are immutable and shared: equal
    /// arguments return the same handle.
    pub fn new(lattice: Lattice, indices: IndexSet) -> Result<Arc<Self>> {
        let key = (lattice, indices);
        if let Some(s) = sector_cache().lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let built = Arc::new(Self::build(key.0, key.1.clone())?);
        Ok(sector_cache()
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(built)
            .clone())
    }

    fn build(lattice: Lattice, indices: IndexSet) -> Result<Self> {
        let n = indices.len();
        let l = lattice.sites();
        let n_configs = checked_pow(l, n)
            .filter(|&d| d <= MAX_SECTOR_DIM)
            .ok_or(Error::SectorTooLarge(usize::MAX, MAX_SECTOR_DIM))?;
        let partitions = enumerate_partitions(&indices)?;
        let mut offsets = Vec::with_capacity(partitions.len() + 1);
        let mut total = 0usize;
        let mut rgs_lookup = HashMap::with_capacity(partitions.len());
        for (pid, p) in partitions.iter().enumerate() {
            offsets.push(total);
            total += checked_pow(l, p.len()).unwrap();
            rgs_lookup.insert(p.rgs(), pid);
        }
        offsets.push(total);
        if total > MAX_SECTOR_DIM {
            return Err(Error::SectorTooLarge(total, MAX_SECTOR_DIM));
        }

        let bells = crate::partitions::bell_numbers(n);
        let mut weights = Vec::with_capacity(n_configs);
        let mut patterns = Vec::with_capacity(n_configs);
        for c in 0..n_configs {
            let x = Config::new(indices.clone(), digits_of(c, l, n))?;
            let pattern = equality_pattern(&x);
            weights.push(pattern.blocks().iter().map(|b| bells[b.len()]).product());
            patterns.push(rgs_lookup[&pattern.rgs()]);
        }
        Ok(SectorSpace {
            lattice,
            indices,
            partitions,
            rgs_lookup,
            offsets,
            weights,
            patterns,
            symmetry_maps: OnceLock::new(),
        })
    }

    /// Sector over `{1, ..., n}`.
    pub fn canonical(lattice: Lattice, n: usize) -> Result<Arc<Self>> {
        Self::new(lattice, IndexSet::range(n))
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn indices(&self) -> &IndexSet {
        &self.indices
    }

    /// Number of particles `|N|`.
    pub fn n(&self) -> usize {
        self.indices.len()
    }

    /// `L^|N|`.
    pub fn config_dim(&self) -> usize {
        self.weights.len()
    }

    /// `Σ_P L^|P|`, equal to the sum of all configuration weights.
    pub fn component_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn config(&self, c: usize) -> Config {
        Config::new(self.indices.clone(), digits_of(c, self.lattice.sites, self.n())).unwrap()
    }

    pub fn config_index(&self, sites: &[usize]) -> usize {
        mixed_radix(sites, self.lattice.sites)
    }

    pub fn weight(&self, c: usize) -> u64 {
        self.weights[c]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition_id(&self, p: &Partition) -> Option<usize> {
        if p.ground() != &self.indices {
            return None;
        }
        self.rgs_lookup.get(&p.rgs()).copied()
    }

    pub(crate) fn partition_id_by_rgs(&self, rgs: &[usize]) -> usize {
        self.rgs_lookup[rgs]
    }

    /// Equality pattern of configuration `c`, as a partition id.
    pub fn pattern_of(&self, c: usize) -> usize {
        self.patterns[c]
    }

    /// Index range of component `pid` inside a [`ComponentVector`].
    pub fn component_range(&self, pid: usize) -> std::ops::Range<usize> {
        self.offsets[pid]..self.offsets[pid + 1]
    }

    /// Component-basis index of `(P, block sites)`; blocks in canonical order.
    pub fn component_index(&self, pid: usize, block_sites: &[usize]) -> usize {
        debug_assert_eq!(block_sites.len(), self.partitions[pid].len());
        self.offsets[pid] + mixed_radix(block_sites, self.lattice.sites)
    }

    /// Inverse of [`component_index`](Self::component_index).
    pub fn component_element(&self, index: usize) -> (usize, Vec<usize>) {
        let pid = self.offsets.partition_point(|&o| o <= index) - 1;
        let local = index - self.offsets[pid];
        (pid, digits_of(local, self.lattice.sites, self.partitions[pid].len()))
    }

    /// Configuration obtained by spreading the block sites over the blocks.
    pub fn expand(&self, pid: usize, block_sites: &[usize]) -> Vec<usize> {
        let p = &self.partitions[pid];
        self.indices
            .iter()
            .map(|i| block_sites[p.block_of(i).unwrap()])
            .collect()
    }

    /// The sets `B_P` (configurations whose equality pattern is exactly `P`),
    /// as configuration indices per partition id.
    pub fn strata(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.partitions.len()];
        for (c, &pid) in self.patterns.iter().enumerate() {
            out[pid].push(c);
        }
        out
    }

    /// `μ_P(Δ)`: configurations of `Δ` lying on the plane `C_P`.
    pub fn measure_of(&self, p: &Partition, subset: &[usize]) -> Result<u64> {
        subset.iter().try_fold(0u64, |acc, &c| {
            Ok(acc + u64::from(membership_c(p, &self.config(c))?))
        })
    }

    /// `μ^{⊙N}(Δ) = Σ_P μ_P(Δ)`.
    pub fn coincidence_measure(&self, subset: &[usize]) -> u64 {
        subset.iter().map(|&c| self.weights[c]).sum()
    }

    /// Gather map of `U_σ` on configurations: `(U_σ a)[c] = a[src[c]]`.
    pub fn config_source_map(&self, sigma: &Permutation) -> Result<Vec<usize>> {
        let inv = sigma.inverse();
        (0..self.config_dim())
            .map(|c| {
                let x = self.config(c).permuted(&inv)?;
                Ok(self.config_index(x.sites()))
            })
            .collect()
    }

    /// Gather map of `U_σ` on the component basis.
    ///
    /// A generic point of component `P` with block sites `v` is sent by
    /// `x ↦ x ∘ σ` to component `σ⁻¹(P)`, block `σ⁻¹(B)` carrying `v_B`.
    pub fn component_source_map(&self, sigma: &Permutation) -> Result<Vec<usize>> {
        if sigma.ground() != &self.indices {
            return Err(Error::GroundMismatch(
                sigma.ground().to_string(),
                self.indices.to_string(),
            ));
        }
        let inv = sigma.inverse();
        let mut src = vec![0; self.component_dim()];
        for (pid, p) in self.partitions.iter().enumerate() {
            let q = p.permuted(&inv)?;
            let qid = self.partition_id(&q).unwrap();
            // block b of P corresponds to block perm[b] of Q
            let perm: Vec<usize> = p
                .blocks()
                .iter()
                .map(|b| q.block_of(inv.apply(b.as_slice()[0]).unwrap()).unwrap())
                .collect();
            let mut w = vec![0; p.len()];
            for idx in self.component_range(pid) {
                let v = digits_of(idx - self.offsets[pid], self.lattice.sites, p.len());
                for (b, &qb) in perm.iter().enumerate() {
                    w[qb] = v[b];
                }
                src[idx] = self.component_index(qid, &w);
            }
        }
        Ok(src)
    }

    /// Component gather maps of every permutation, in the order of
    /// [`Permutation::all`].
    pub fn symmetry_maps(&self) -> &[Vec<usize>] {
        self.symmetry_maps.get_or_init(|| {
            Permutation::all(&self.indices)
                .iter()
                .map(|s| self.component_source_map(s).unwrap())
                .collect()
        })
    }

    /// Orbits of the component basis under all index permutations.
    pub fn symmetric_orbits(&self) -> Vec<Vec<usize>> {
        let maps = self.symmetry_maps();
        let mut seen = vec![false; self.component_dim()];
        let mut orbits = Vec::new();
        for start in 0..self.component_dim() {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<usize> = maps.iter().map(|m| m[start]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &o in &orbit {
                seen[o] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Isometry onto the symmetric subspace of the component form: one
    /// normalized orbit indicator per column.
    pub fn symmetric_basis<T: Real>(&self) -> DMatrix<Cplx<T>> {
        let orbits = self.symmetric_orbits();
        let mut b = DMatrix::from_element(self.component_dim(), orbits.len(), czero());
        for (col, orbit) in orbits.iter().enumerate() {
            let v = T::one() / T::lit(orbit.len() as f64).sqrt();
            for &i in orbit {
                b[(i, col)] = Cplx::new(v, T::zero());
            }
        }
        b
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> Result<()> {
        if Arc::ptr_eq(self, other)
            || (self.lattice == other.lattice && self.indices == other.indices)
        {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

fn random_amplitudes<T: Real, R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Cplx<T>> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.random_range(-1.0..1.0);
            let im: f64 = rng.random_range(-1.0..1.0);
            Cplx::new(T::lit(re), T::lit(im))
        })
        .collect()
}

fn dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

/// A function on `X^N` with the coincidence-weighted inner product.
#[derive(Clone, Debug)]
pub struct WeightedVector<T: Real> {
    space: Arc<SectorSpace>,
    amps: Vec<Cplx<T>>,
}

impl<T: Real> WeightedVector<T> {
    pub fn zeros(space: &Arc<SectorSpace>) -> Self {
        WeightedVector {
            space: space.clone(),
            amps: vec![czero(); space.config_dim()],
        }
    }

    pub fn from_amplitudes(space: &Arc<SectorSpace>, amps: Vec<Cplx<T>>) -> Result<Self> {
        if amps.len() != space.config_dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(WeightedVector {
            space: space.clone(),
            amps,
        })
    }

    /// Evaluates `f` on every configuration (sites in natural index order).
    pub fn from_fn(space: &Arc<SectorSpace>, mut f: impl FnMut(&[usize]) -> Cplx<T>) -> Self {
        let amps = (0..space.config_dim())
            .map(|c| f(space.config(c).sites()))
            .collect();
        WeightedVector {
            space: space.clone(),
            amps,
        }
    }

    pub fn random<R: Rng + ?Sized>(space: &Arc<SectorSpace>, rng: &mut R) -> Self {
        WeightedVector {
            space: space.clone(),
            amps: random_amplitudes(space.config_dim(), rng),
        }
    }

    pub fn space(&self) -> &Arc<SectorSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }

    pub fn at(&self, sites: &[usize]) -> Cplx<T> {
        self.amps[self.space.config_index(sites)]
    }

    /// `Σ_x w(x) conj(a(x)) b(x)`.
    pub fn inner_product(&self, other: &Self) -> Result<Cplx<T>> {
        self.space.same(&other.space)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .zip(self.space.weights())
            .fold(czero(), |acc, ((a, b), &w)| {
                acc + a.conj() * b * T::lit(w as f64)
            }))
    }

    /// `Σ_P Σ_{x ∈ C_P} conj(a(x)) b(x)`, summed plane by plane.
    pub fn plane_sum_inner_product(&self, other: &Self) -> Result<Cplx<T>> {
        self.space.same(&other.space)?;
        let mut acc = czero();
        for p in self.space.partitions() {
            for c in 0..self.space.config_dim() {
                if membership_c(p, &self.space.config(c))? {
                    acc += self.amps[c].conj() * other.amps[c];
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> T {
        self.inner_product(self).unwrap().re
    }

    /// `U_σ a`, with `(U_σ a)(x) = a(f_σ⁻¹(x))`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        let src = self.space.config_source_map(sigma)?;
        Ok(WeightedVector {
            space: self.space.clone(),
            amps: src.iter().map(|&s| self.amps[s]).collect(),
        })
    }

    /// `S a = (1/|N|!) Σ_σ U_σ a`.
    pub fn symmetrize(&self) -> Self {
        let perms = Permutation::all(self.space.indices());
        let scale = T::one() / T::lit(perms.len() as f64);
        let mut out = vec![czero(); self.amps.len()];
        for sigma in &perms {
            let src = self.space.config_source_map(sigma).unwrap();
            for (o, &s) in out.iter_mut().zip(&src) {
                *o += self.amps[s];
            }
        }
        WeightedVector {
            space: self.space.clone(),
            amps: out.into_iter().map(|a| a * scale).collect(),
        }
    }

    /// Restriction to every coincidence plane, as a component vector.
    pub fn decompose(&self) -> ComponentVector<T> {
        let space = &self.space;
        let mut amps = vec![czero(); space.component_dim()];
        for (idx, a) in amps.iter_mut().enumerate() {
            let (pid, v) = space.component_element(idx);
            *a = self.amps[space.config_index(&space.expand(pid, &v))];
        }
        ComponentVector {
            space: space.clone(),
            amps,
        }
    }

    /// CSV rows `config,weight,re,im`; the configuration is written as a
    /// space-separated site tuple.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("config,weight,re,im\n");
        for (c, a) in self.amps.iter().enumerate() {
            let sites: Vec<String> = self
                .space
                .config(c)
                .sites()
                .iter()
                .map(|s| s.to_string())
                .collect();
            let _ = writeln!(
                out,
                "({}),{},{:e},{:e}",
                sites.join(" "),
                self.space.weight(c),
                a.re.to_f64_lossy(),
                a.im.to_f64_lossy()
            );
        }
        out
    }
}

/// An element of `⊕_P ℓ²(C_P)`: one function of the block sites per partition.
#[derive(Clone, Debug)]
pub struct ComponentVector<T: Real> {
    space: Arc<SectorSpace>,
    amps: Vec<Cplx<T>>,
}

impl<T: Real> ComponentVector<T> {
    pub fn zeros(space: &Arc<SectorSpace>) -> Self {
        ComponentVector {
            space: space.clone(),
            amps: vec![czero(); space.component_dim()],
        }
    }

    pub fn from_amplitudes(space: &Arc<SectorSpace>, amps: Vec<Cplx<T>>) -> Result<Self> {
        if amps.len() != space.component_dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(ComponentVector {
            space: space.clone(),
            amps,
        })
    }

    /// Evaluates `f(P, block sites)` on every component basis element.
    pub fn from_fn(
        space: &Arc<SectorSpace>,
        mut f: impl FnMut(&Partition, &[usize]) -> Cplx<T>,
    ) -> Self {
        let amps = (0..space.component_dim())
            .map(|idx| {
                let (pid, v) = space.component_element(idx);
                f(&space.partitions()[pid], &v)
            })
            .collect();
        ComponentVector {
            space: space.clone(),
            amps,
        }
    }

    pub fn random<R: Rng + ?Sized>(space: &Arc<SectorSpace>, rng: &mut R) -> Self {
        ComponentVector {
            space: space.clone(),
            amps: random_amplitudes(space.component_dim(), rng),
        }
    }

    /// A random symmetric vector.
    pub fn random_symmetric<R: Rng + ?Sized>(space: &Arc<SectorSpace>, rng: &mut R) -> Self {
        Self::random(space, rng).symmetrize()
    }

    pub fn space(&self) -> &Arc<SectorSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Cplx<T>> {
        self.amps
    }

    /// Amplitudes of the component of partition `p`.
    pub fn component(&self, p: &Partition) -> Option<&[Cplx<T>]> {
        let pid = self.space.partition_id(p)?;
        Some(&self.amps[self.space.component_range(pid)])
    }

    /// Unit-weight inner product summed over all components.
    pub fn inner_product(&self, other: &Self) -> Result<Cplx<T>> {
        self.space.same(&other.space)?;
        Ok(dot(&self.amps, &other.amps))
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        ComponentVector {
            space: self.space.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.same(&other.space)?;
        Ok(ComponentVector {
            space: self.space.clone(),
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Cplx::new(-T::one(), T::zero())))
    }

    pub fn max_abs(&self) -> T {
        self.amps.iter().fold(T::zero(), |m, a| m.max(cabs(*a)))
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|a| a.re == T::zero() && a.im == T::zero())
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        let src = self.space.component_source_map(sigma)?;
        Ok(ComponentVector {
            space: self.space.clone(),
            amps: src.iter().map(|&s| self.amps[s]).collect(),
        })
    }

    pub fn symmetrize(&self) -> Self {
        let maps = self.space.symmetry_maps();
        let scale = T::one() / T::lit(maps.len() as f64);
        let mut out = vec![czero(); self.amps.len()];
        for src in maps {
            for (o, &s) in out.iter_mut().zip(src) {
                *o += self.amps[s];
            }
        }
        ComponentVector {
            space: self.space.clone(),
            amps: out.into_iter().map(|a| a * scale).collect(),
        }
    }

    /// Largest deviation between `self` and any `U_σ self`.
    pub fn asymmetry(&self) -> T {
        self.space
            .symmetry_maps()
            .iter()
            .flat_map(|src| src.iter().enumerate().map(|(i, &s)| cabs(self.amps[i] - self.amps[s])))
            .fold(T::zero(), |m, x| m.max(x))
    }

    /// Largest disagreement between components at points where planes
    /// overlap; zero exactly for vectors produced by `decompose`.
    pub fn inconsistency(&self) -> T {
        let space = &self.space;
        let mut reference: Vec<Option<Cplx<T>>> = vec![None; space.config_dim()];
        let mut worst = T::zero();
        for (idx, a) in self.amps.iter().enumerate() {
            let (pid, v) = space.component_element(idx);
            let c = space.config_index(&space.expand(pid, &v));
            match reference[c] {
                None => reference[c] = Some(*a),
                Some(r) => worst = worst.max(cabs(r - a)),
            }
        }
        worst
    }

    /// Reads back a function on `X^N` from the finest component. Inverts
    /// [`WeightedVector::decompose`].
    pub fn recompose(&self) -> WeightedVector<T> {
        let space = &self.space;
        let finest = space
            .partition_id(&Partition::finest(space.indices()))
            .unwrap();
        let range = space.component_range(finest);
        WeightedVector {
            space: space.clone(),
            amps: self.amps[range].to_vec(),
        }
    }

    /// Multiplication by `1^N_I`: keeps the components in which `I` is a block.
    pub fn mask_block(&self, block: &IndexSet) -> Result<Self> {
        let space = &self.space;
        let mut out = self.clone();
        for (pid, p) in space.partitions().iter().enumerate() {
            // A generic point of component P has pattern P: one distinct
            // label per block.
            let generic = Config::new(space.indices().clone(), p.rgs())?;
            if !indicator_b(block, &generic)? {
                for a in &mut out.amps[space.component_range(pid)] {
                    *a = czero();
                }
            }
        }
        Ok(out)
    }

    /// `∫ h dμ_J`: pins the indices of `J` to a common site and sums over it.
    /// The result lives on the sector over `N \ J`.
    pub fn integrate_block(&self, block: &IndexSet) -> Result<Self> {
        let space = &self.space;
        if block.is_empty() || !block.is_subset(space.indices()) {
            return Err(Error::NotASubset(block.to_string(), space.indices().to_string()));
        }
        let rest = SectorSpace::new(space.lattice(), space.indices().difference(block))?;
        let l = space.lattice().sites();
        let mut amps = vec![czero(); rest.component_dim()];
        for (qid, q) in rest.partitions().iter().enumerate() {
            let full = q.with_block(block)?;
            let fid = space.partition_id(&full).unwrap();
            let jpos = full.blocks().iter().position(|b| b == block).unwrap();
            let qmap: Vec<usize> = q
                .blocks()
                .iter()
                .map(|b| full.blocks().iter().position(|c| c == b).unwrap())
                .collect();
            let mut w = vec![0; full.len()];
            for local in 0..rest.component_range(qid).len() {
                let v = digits_of(local, l, q.len());
                for (b, &fb) in qmap.iter().enumerate() {
                    w[fb] = v[b];
                }
                let mut acc = czero();
                for s in 0..l {
                    w[jpos] = s;
                    acc += self.amps[space.component_index(fid, &w)];
                }
                amps[rest.component_range(qid).start + local] = acc;
            }
        }
        Ok(ComponentVector { space: rest, amps })
    }

    /// `∫ h dμ^{⊙N}`.
    pub fn integrate(&self) -> Cplx<T> {
        self.amps.iter().fold(czero(), |acc, a| acc + a)
    }

    /// CSV rows `partition,block_sites,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("partition,block_sites,re,im\n");
        for (idx, a) in self.amps.iter().enumerate() {
            let (pid, v) = self.space.component_element(idx);
            let sites: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(
                out,
                "\"{}\",({}),{:e},{:e}",
                self.space.partitions()[pid],
                sites.join(" "),
                a.re.to_f64_lossy(),
                a.im.to_f64_lossy()
            );
        }
        out
    }
}

/// The truncated coincidence Fock space: canonical sectors `n = 0..=n_max`.
#[derive(Debug)]
pub struct FockSpace {
    lattice: Lattice,
    n_max: usize,
    sectors: Vec<Arc<SectorSpace>>,
}

impl FockSpace {
    pub fn new(lattice: Lattice, n_max: usize) -> Result<Arc<Self>> {
        let sectors = (0..=n_max)
            .map(|n| SectorSpace::canonical(lattice, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(FockSpace {
            lattice,
            n_max,
            sectors,
        }))
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn sector(&self, n: usize) -> Result<&Arc<SectorSpace>> {
        self.sectors
            .get(n)
            .ok_or(Error::TruncationExceeded(n, self.n_max))
    }

    pub fn sectors(&self) -> &[Arc<SectorSpace>] {
        &self.sectors
    }

    /// Offset of sector `n` in the concatenated component basis.
    pub fn offset(&self, n: usize) -> usize {
        self.sectors[..n].iter().map(|s| s.component_dim()).sum()
    }

    pub fn dim(&self) -> usize {
        self.offset(self.n_max + 1)
    }

    /// Block-diagonal isometry onto the symmetric subspace.
    pub fn symmetric_basis<T: Real>(&self) -> DMatrix<Cplx<T>> {
        let blocks: Vec<DMatrix<Cplx<T>>> =
            self.sectors.iter().map(|s| s.symmetric_basis()).collect();
        let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
        let mut out = DMatrix::from_element(self.dim(), cols, czero());
        let (mut r, mut c) = (0, 0);
        for b in &blocks {
            out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
            r += b.nrows();
            c += b.ncols();
        }
        out
    }
}

/// A finite-particle vector of the truncated Fock space.
#[derive(Clone, Debug)]
pub struct FockVector<T: Real> {
    space: Arc<FockSpace>,
    sectors: Vec<ComponentVector<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn zeros(space: &Arc<FockSpace>) -> Self {
        FockVector {
            space: space.clone(),
            sectors: space.sectors().iter().map(ComponentVector::zeros).collect(),
        }
    }

    /// The vacuum `Ψ_0 = (1, 0, 0, ...)`.
    pub fn vacuum(space: &Arc<FockSpace>) -> Self {
        let mut v = Self::zeros(space);
        v.sectors[0].amps[0] = Cplx::new(T::one(), T::zero());
        v
    }

    /// Places one sector vector into an otherwise empty Fock vector.
    pub fn from_sector(space: &Arc<FockSpace>, vector: ComponentVector<T>) -> Result<Self> {
        let n = vector.space().n();
        space.sector(n)?.same(vector.space())?;
        let mut v = Self::zeros(space);
        v.sectors[n] = vector;
        Ok(v)
    }

    pub fn random_symmetric<R: Rng + ?Sized>(space: &Arc<FockSpace>, rng: &mut R) -> Self {
        FockVector {
            space: space.clone(),
            sectors: space
                .sectors()
                .iter()
                .map(|s| ComponentVector::random_symmetric(s, rng))
                .collect(),
        }
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn sector(&self, n: usize) -> &ComponentVector<T> {
        &self.sectors[n]
    }

    pub fn sectors(&self) -> &[ComponentVector<T>] {
        &self.sectors
    }

    pub(crate) fn sector_mut(&mut self, n: usize) -> &mut ComponentVector<T> {
        &mut self.sectors[n]
    }

    pub fn inner_product(&self, other: &Self) -> Result<Cplx<T>> {
        self.sectors
            .iter()
            .zip(&other.sectors)
            .try_fold(czero(), |acc, (a, b)| Ok(acc + a.inner_product(b)?))
    }

    pub fn norm_sqr(&self) -> T {
        self.sectors
            .iter()
            .fold(T::zero(), |acc, s| acc + s.norm_sqr())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(FockVector {
            space: self.space.clone(),
            sectors: self
                .sectors
                .iter()
                .zip(&other.sectors)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, c: Cplx<T>) -> Self {
        FockVector {
            space: self.space.clone(),
            sectors: self.sectors.iter().map(|s| s.scale(c)).collect(),
        }
    }

    /// Concatenated component amplitudes, sector by sector.
    pub fn to_flat(&self) -> Vec<Cplx<T>> {
        self.sectors
            .iter()
            .flat_map(|s| s.amps.iter().copied())
            .collect()
    }

    pub fn from_flat(space: &Arc<FockSpace>, flat: &[Cplx<T>]) -> Result<Self> {
        if flat.len() != space.dim() {
            return Err(Error::SpaceMismatch);
        }
        let sectors = space
            .sectors()
            .iter()
            .enumerate()
            .map(|(n, s)| {
                let off = space.offset(n);
                ComponentVector::from_amplitudes(s, flat[off..off + s.component_dim()].to_vec())
            })
            .collect::<Result<_>>()?;
        Ok(FockVector {
            space: space.clone(),
            sectors,
        })
    }
}
