//! Finite-difference model of the coupled singular Laplacian.
//!
//! The one-particle space carries the measure `[1 + δ(x)] dx`; in the s-wave
//! channel a state is a radial function `u` on `[0, R]` together with the
//! point amplitude `u(0)/λ`. Discretizing the quadratic form
//!
//! ```text
//! ‖u'‖²  on  nodes r_j = j h,  u_J = 0,
//! ```
//!
//! with lumped mass `h` per node, `h/2` at the origin and the extra weight
//! `1/λ²` for the point component, gives a pencil `(K, M)` with `K`
//! symmetric positive semidefinite and `M` diagonal positive. The energies
//! solve `K v = E M v` and the Hamiltonian acts as `(1/2m) M⁻¹ K`.
//!
//! The two-particle model adds a periodic center coordinate with unit
//! spacing: `K2 = K ⊗ Mc + M ⊗ Kc`, `M2 = M ⊗ Mc`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Smallest accepted `J`: at least 8 nodes strictly between the origin and
/// the outer wall.
pub const MIN_J: usize = 9;

/// Largest pencil dimension handled by the dense eigensolver.
pub const MAX_PENCIL_DIM: usize = 6400;

/// Default eigen-residual tolerance.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Radial grid `r_j = j h`, `j = 0..=J`, `h = R/J`, Dirichlet at `r_J = R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialGrid {
    pub j: usize,
    pub r: f64,
}

impl RadialGrid {
    pub fn new(j: usize, r: f64) -> Result<Self> {
        if j < MIN_J {
            return Err(Error::BadParameter(format!("J = {j} is below the minimum {MIN_J}")));
        }
        if j > MAX_PENCIL_DIM {
            return Err(Error::BadParameter(format!(
                "J = {j} exceeds the dense limit {MAX_PENCIL_DIM}"
            )));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::BadParameter(format!("R = {r} must be positive")));
        }
        Ok(RadialGrid { j, r })
    }

    pub fn spacing(&self) -> f64 {
        self.r / self.j as f64
    }

    /// Radii of the unknowns `r_0 ..= r_{J-1}`.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.j).map(|i| i as f64 * self.spacing()).collect()
    }
}

/// A generalized eigenproblem `K v = E M v` with diagonal `M`.
///
/// The first `singular_len` unknowns are the nodes at the origin; they carry
/// the point component of the state.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil<T: Real> {
    k: DMatrix<T>,
    m: DVector<T>,
    singular_len: usize,
}

impl<T: Real> Pencil<T> {
    pub fn new(k: DMatrix<T>, m: DVector<T>, singular_len: usize) -> Result<Self> {
        if !k.is_square() || k.nrows() != m.len() || singular_len > m.len() {
            return Err(Error::BadParameter("pencil shapes disagree".into()));
        }
        if m.iter().any(|&x| x <= T::zero()) {
            return Err(Error::BadParameter("mass matrix must be positive".into()));
        }
        Ok(Pencil { k, m, singular_len })
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn stiffness(&self) -> &DMatrix<T> {
        &self.k
    }

    /// Diagonal of `M`.
    pub fn mass(&self) -> &DVector<T> {
        &self.m
    }

    pub fn singular_len(&self) -> usize {
        self.singular_len
    }

    /// `max |K_ij − K_ji|`.
    pub fn asymmetry(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.k[(i, j)] - self.k[(j, i)]).abs());
            }
        }
        worst
    }

    /// `M^{-1/2} K M^{-1/2}`.
    pub fn similarity(&self) -> DMatrix<T> {
        let s = self.m.map(|x| T::one() / x.sqrt());
        let mut a = self.k.clone();
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                a[(i, j)] *= s[i] * s[j];
            }
        }
        a
    }

    /// Eigenvalues ascending with `M`-orthonormal eigenvectors.
    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        let eig = SymmetricEigen::new(self.similarity());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(self.dim(), self.dim());
        for (col, &i) in order.iter().enumerate() {
            for r in 0..self.dim() {
                vectors[(r, col)] = eig.eigenvectors[(r, i)] / self.m[r].sqrt();
            }
        }
        let spectrum = Spectrum { values, vectors };
        let scale = self.k.iter().fold(T::one(), |a, x| a.max(x.abs()));
        let tol = T::lit(RESIDUAL_TOL).max(T::default_epsilon() * T::lit(1e4) * scale);
        let residual = spectrum.max_residual(self);
        if !(residual <= tol) {
            return Err(Error::NumericalFailure(format!(
                "eigen-residual {:e} above {:e}",
                residual.to_f64_lossy(),
                tol.to_f64_lossy()
            )));
        }
        Ok(spectrum)
    }

    /// `v^† M w`.
    pub fn m_inner(&self, v: &DVector<Cplx<T>>, w: &DVector<Cplx<T>>) -> Cplx<T> {
        v.iter()
            .zip(w.iter())
            .zip(self.m.iter())
            .fold(Cplx::new(T::zero(), T::zero()), |a, ((x, y), &m)| {
                a + x.conj() * y * m
            })
    }

    /// `(‖ψ‖²_M, point-node part, remainder)`.
    pub fn norm_split(&self, psi: &DVector<Cplx<T>>) -> (T, T, T) {
        let mut singular = T::zero();
        let mut regular = T::zero();
        for (i, (z, &m)) in psi.iter().zip(self.m.iter()).enumerate() {
            if i < self.singular_len {
                singular += z.norm_sqr() * m;
            } else {
                regular += z.norm_sqr() * m;
            }
        }
        (singular + regular, singular, regular)
    }

    /// Time evolution of `psi0` sampled at `times`, for particle mass `mass`.
    pub fn evolve(
        &self,
        spectrum: &Spectrum<T>,
        mass: T,
        psi0: &DVector<Cplx<T>>,
        times: &[T],
    ) -> Result<EvolutionTrace<T>> {
        if psi0.len() != self.dim() {
            return Err(Error::BadParameter("initial state has the wrong length".into()));
        }
        if psi0.iter().all(|z| z.norm_sqr() == T::zero()) {
            return Err(Error::BadParameter("initial state is zero".into()));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadParameter("times must increase".into()));
        }
        let coeffs = spectrum.expand(self, psi0);
        let mut trace = EvolutionTrace {
            times: times.to_vec(),
            norm_total: Vec::with_capacity(times.len()),
            norm_singular: Vec::with_capacity(times.len()),
            norm_regular: Vec::with_capacity(times.len()),
            eigenvalues: spectrum.values.clone(),
        };
        for &t in times {
            let psi = spectrum.state_at(&coeffs, mass, t);
            let (total, singular, regular) = self.norm_split(&psi);
            trace.norm_total.push(total);
            trace.norm_singular.push(singular);
            trace.norm_regular.push(regular);
        }
        Ok(trace)
    }
}

/// Eigenvalues ascending and `M`-orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<T>,
}

impl<T: Real> Spectrum<T> {
    /// `max_i ‖K v_i − E_i M v_i‖ / ‖v_i‖`.
    pub fn max_residual(&self, pencil: &Pencil<T>) -> T {
        let mut worst = T::zero();
        for (i, &e) in self.values.iter().enumerate() {
            let v = self.vectors.column(i);
            let kv = &pencil.k * v;
            let r = kv - v.component_mul(&pencil.m) * e;
            worst = worst.max(r.norm() / v.norm());
        }
        worst
    }

    /// `max |V^T M V − I|`.
    pub fn orthonormality_defect(&self, pencil: &Pencil<T>) -> T {
        let mut mv = self.vectors.clone();
        for (r, &m) in pencil.m.iter().enumerate() {
            mv.row_mut(r).scale_mut(m);
        }
        let g = self.vectors.transpose() * mv;
        let n = g.nrows();
        (g - DMatrix::identity(n, n)).amax()
    }

    /// Coefficients `v_i^T M ψ`.
    pub fn expand(&self, pencil: &Pencil<T>, psi: &DVector<Cplx<T>>) -> Vec<Cplx<T>> {
        (0..self.values.len())
            .map(|i| {
                self.vectors
                    .column(i)
                    .iter()
                    .zip(psi.iter())
                    .zip(pencil.m.iter())
                    .fold(Cplx::new(T::zero(), T::zero()), |a, ((&v, z), &m)| {
                        a + z * (v * m)
                    })
            })
            .collect()
    }

    /// `Σ_i exp(−i E_i t / 2m) c_i v_i`.
    pub fn state_at(&self, coeffs: &[Cplx<T>], mass: T, t: T) -> DVector<Cplx<T>> {
        let two_m = mass + mass;
        let mut psi = DVector::from_element(self.vectors.nrows(), Cplx::new(T::zero(), T::zero()));
        for (i, (&e, c)) in self.values.iter().zip(coeffs).enumerate() {
            let phase = -(e * t / two_m);
            let w = c * Cplx::new(phase.cos(), phase.sin());
            for (p, &v) in psi.iter_mut().zip(self.vectors.column(i).iter()) {
                *p += w * v;
            }
        }
        psi
    }

    /// CSV rows `index,eigenvalue`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue\n");
        for (i, e) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{:e}", e.to_f64_lossy());
        }
        out
    }
}

/// Norms of an evolving state.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionTrace<T: Real> {
    pub times: Vec<T>,
    pub norm_total: Vec<T>,
    pub norm_singular: Vec<T>,
    pub norm_regular: Vec<T>,
    pub eigenvalues: Vec<T>,
}

impl<T: Real> EvolutionTrace<T> {
    /// `max_t |‖ψ(t)‖ − ‖ψ(0)‖|` for the `M`-norm squared.
    pub fn norm_drift(&self) -> T {
        let n0 = self.norm_total[0];
        self.norm_total
            .iter()
            .fold(T::zero(), |a, &n| a.max((n - n0).abs()))
    }

    /// CSV rows `t,norm_total,norm_singular,norm_regular`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,norm_total,norm_singular,norm_regular\n");
        for i in 0..self.times.len() {
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e}",
                self.times[i].to_f64_lossy(),
                self.norm_total[i].to_f64_lossy(),
                self.norm_singular[i].to_f64_lossy(),
                self.norm_regular[i].to_f64_lossy()
            );
        }
        out
    }
}

/// Uniform sample `0, dt, ..., t_max` with `steps` intervals.
pub fn time_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) || steps == 0 {
        return Err(Error::BadParameter(format!(
            "time grid needs t_max > 0 and steps >= 1, got {t_max} and {steps}"
        )));
    }
    Ok((0..=steps).map(|i| t_max * i as f64 / steps as f64).collect())
}

/// Parameters of the radial problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialParams {
    pub j: usize,
    pub r: f64,
    pub lambda: f64,
    pub mass: f64,
}

impl RadialParams {
    pub fn validate(&self) -> Result<RadialGrid> {
        if !(self.lambda.is_finite() && self.lambda != 0.0) {
            return Err(Error::BadParameter(format!(
                "lambda = {} must be finite and nonzero",
                self.lambda
            )));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::BadParameter(format!("mass = {} must be positive", self.mass)));
        }
        RadialGrid::new(self.j, self.r)
    }
}

/// The one-particle s-wave pencil.
#[derive(Clone, Debug)]
pub struct RadialPencil<T: Real> {
    params: RadialParams,
    grid: RadialGrid,
    pencil: Pencil<T>,
}

fn radial_stiffness<T: Real>(grid: &RadialGrid) -> DMatrix<T> {
    let j = grid.j;
    let inv_h = T::lit(1.0 / grid.spacing());
    let mut k = DMatrix::zeros(j, j);
    for i in 0..j {
        // each interval [r_i, r_{i+1}] contributes |u_{i+1} − u_i|²/h
        k[(i, i)] += inv_h;
        if i + 1 < j {
            k[(i + 1, i + 1)] += inv_h;
            k[(i, i + 1)] -= inv_h;
            k[(i + 1, i)] -= inv_h;
        }
    }
    k
}

fn radial_mass<T: Real>(grid: &RadialGrid, point_weight: f64) -> DVector<T> {
    let h = grid.spacing();
    DVector::from_fn(grid.j, |i, _| {
        if i == 0 {
            T::lit(h / 2.0 + point_weight)
        } else {
            T::lit(h)
        }
    })
}

/// `K`, `M` for the one-particle problem: `M_00 = h/2 + 1/λ²`.
pub fn build_1p<T: Real>(j: usize, r: f64, lambda: f64, mass: f64) -> Result<RadialPencil<T>> {
    let params = RadialParams { j, r, lambda, mass };
    let grid = params.validate()?;
    let pencil = Pencil::new(
        radial_stiffness(&grid),
        radial_mass(&grid, 1.0 / (lambda * lambda)),
        1,
    )?;
    Ok(RadialPencil {
        params,
        grid,
        pencil,
    })
}

impl<T: Real> RadialPencil<T> {
    pub fn params(&self) -> RadialParams {
        self.params
    }

    pub fn grid(&self) -> RadialGrid {
        self.grid
    }

    pub fn pencil(&self) -> &Pencil<T> {
        &self.pencil
    }

    pub fn mass_m(&self) -> T {
        T::lit(self.params.mass)
    }

    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        self.pencil.spectrum()
    }

    /// `u ↦ u_0`.
    pub fn boundary_value(&self, u: &DVector<T>) -> T {
        u[0]
    }

    /// `u ↦ (u_1 − u_0)/h`.
    pub fn boundary_slope(&self, u: &DVector<T>) -> T {
        (u[1] - u[0]) / T::lit(self.grid.spacing())
    }

    /// `(1/2m) M⁻¹ K u`.
    pub fn apply_hamiltonian(&self, u: &DVector<T>) -> DVector<T> {
        let ku = &self.pencil.k * u;
        let two_m = T::lit(2.0 * self.params.mass);
        ku.component_div(&self.pencil.m) / two_m
    }

    /// The same problem with the point weight `1/λ²` removed.
    pub fn without_point_mass(&self) -> Self {
        let mut out = self.clone();
        out.pencil.m = radial_mass(&self.grid, 0.0);
        out
    }

    /// Control problem: the origin node is cut off from the rest of the grid,
    /// so `e_0` is an exact eigenvector.
    pub fn decoupled(&self) -> Self {
        let mut out = self.clone();
        out.pencil.k[(0, 1)] = T::zero();
        out.pencil.k[(1, 0)] = T::zero();
        out
    }

    /// `e_0`, the state concentrated on the origin node.
    pub fn singular_start(&self) -> DVector<Cplx<T>> {
        let mut e = DVector::from_element(self.grid.j, Cplx::new(T::zero(), T::zero()));
        e[0] = Cplx::new(T::one(), T::zero());
        e
    }

    pub fn evolve(&self, psi0: &DVector<Cplx<T>>, times: &[T]) -> Result<EvolutionTrace<T>> {
        let s = self.spectrum()?;
        self.pencil.evolve(&s, self.mass_m(), psi0, times)
    }
}

/// How far `e_0` is from every eigenvector, measured in the `M` geometry.
#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    /// `min_i ∠(e_0, v_i)` in radians.
    pub min_angle: f64,
    /// Index of the eigenvector closest to `e_0`.
    pub closest: usize,
    /// `∠(e_0, v_i)` for every `i`.
    pub angles: Vec<f64>,
}

/// Angles between the point-node state `e_0` and the eigenvectors.
///
/// With `c_i = ⟨v_i, e_0⟩_M / ‖e_0‖_M`, completeness gives
/// `sin² ∠(e_0, v_i) = Σ_{j≠i} c_j²`, which stays accurate near zero.
pub fn mixing_diagnostics<T: Real>(pencil: &RadialPencil<T>) -> Result<MixingReport> {
    let p = pencil.pencil();
    let s = p.spectrum()?;
    let e0 = pencil.singular_start();
    let norm0 = p.norm_split(&e0).0.to_f64_lossy();
    let c2: Vec<f64> = s
        .expand(p, &e0)
        .iter()
        .map(|c| c.norm_sqr().to_f64_lossy() / norm0)
        .collect();
    let total: f64 = c2.iter().sum();
    let angles: Vec<f64> = (0..c2.len())
        .map(|i| {
            let rest: f64 = c2
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c)
                .sum();
            (rest / total).clamp(0.0, 1.0).sqrt().asin()
        })
        .collect();
    let (closest, &min_angle) = angles
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    Ok(MixingReport {
        min_angle,
        closest,
        angles,
    })
}

/// Periodic center grid: stiffness and mass with unit spacing.
pub fn center_operators<T: Real>(lc: usize) -> (DMatrix<T>, DVector<T>) {
    let mut kc = DMatrix::zeros(lc, lc);
    if lc > 1 {
        for i in 0..lc {
            let next = (i + 1) % lc;
            kc[(i, i)] += T::one();
            kc[(next, next)] += T::one();
            kc[(i, next)] -= T::one();
            kc[(next, i)] -= T::one();
        }
    }
    (kc, DVector::from_element(lc, T::one()))
}

/// The two-particle pencil over (relative radius) × (center coordinate).
#[derive(Clone, Debug)]
pub struct TwoParticlePencil<T: Real> {
    radial: RadialPencil<T>,
    lc: usize,
    kc: DMatrix<T>,
    mc: DVector<T>,
    pencil: Pencil<T>,
}

/// `K2 = K ⊗ Mc + M ⊗ Kc`, `M2 = M ⊗ Mc`. Unknowns are ordered radial-major.
///
/// `Lc = 1` gives back the one-particle problem; otherwise `Lc >= 4`.
pub fn build_2p<T: Real>(
    j: usize,
    r: f64,
    lc: usize,
    lambda: f64,
    mass: f64,
) -> Result<TwoParticlePencil<T>> {
    if lc != 1 && lc < 4 {
        return Err(Error::BadParameter(format!(
            "Lc = {lc}: the center grid needs Lc = 1 or Lc >= 4"
        )));
    }
    if j.saturating_mul(lc) > MAX_PENCIL_DIM {
        return Err(Error::BadParameter(format!(
            "J·Lc = {} exceeds the dense limit {MAX_PENCIL_DIM}",
            j.saturating_mul(lc)
        )));
    }
    let radial = build_1p::<T>(j, r, lambda, mass)?;
    let (kc, mc) = center_operators::<T>(lc);
    let k = radial.pencil.k.kronecker(&DMatrix::from_diagonal(&mc))
        + DMatrix::from_diagonal(&radial.pencil.m).kronecker(&kc);
    let m = radial.pencil.m.kronecker(&mc);
    let pencil = Pencil::new(k, m, lc)?;
    Ok(TwoParticlePencil {
        radial,
        lc,
        kc,
        mc,
        pencil,
    })
}

impl<T: Real> TwoParticlePencil<T> {
    pub fn radial(&self) -> &RadialPencil<T> {
        &self.radial
    }

    pub fn lc(&self) -> usize {
        self.lc
    }

    pub fn center_stiffness(&self) -> &DMatrix<T> {
        &self.kc
    }

    pub fn center_mass(&self) -> &DVector<T> {
        &self.mc
    }

    pub fn pencil(&self) -> &Pencil<T> {
        &self.pencil
    }

    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        self.pencil.spectrum()
    }

    /// Eigenvalues from one radial solve per center mode: `(K + κ_q M, M)`
    /// with `κ_q = 2 − 2 cos(2π q / Lc)`, merged and sorted.
    pub fn mode_spectrum(&self) -> Result<Vec<T>> {
        let rp = &self.radial.pencil;
        let mut all = Vec::with_capacity(self.pencil.dim());
        for q in 0..self.lc {
            let kappa = if self.lc == 1 {
                0.0
            } else {
                2.0 - 2.0 * (2.0 * std::f64::consts::PI * q as f64 / self.lc as f64).cos()
            };
            let shifted = &rp.k + DMatrix::from_diagonal(&rp.m) * T::lit(kappa);
            let p = Pencil::new(shifted, rp.m.clone(), 1)?;
            all.extend(p.spectrum()?.values);
        }
        all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Ok(all)
    }

    /// A state concentrated on the origin node at center site `c`.
    pub fn singular_start(&self, c: usize) -> DVector<Cplx<T>> {
        let mut e = DVector::from_element(self.pencil.dim(), Cplx::new(T::zero(), T::zero()));
        e[c % self.lc] = Cplx::new(T::one(), T::zero());
        e
    }

    pub fn evolve(&self, psi0: &DVector<Cplx<T>>, times: &[T]) -> Result<EvolutionTrace<T>> {
        let s = self.spectrum()?;
        self.pencil.evolve(&s, self.radial.mass_m(), psi0, times)
    }
}
