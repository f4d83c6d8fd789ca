//! Verification suites: each returns a list of named checks with the
//! measured residual and the bound it is held to.

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldops::{
    annihilate, build_interaction_hamiltonian, commutator_check, create, field_matrix, frobenius,
    interaction_composed, interaction_direct, interaction_unsym, vacuum_cyclicity, CouplingSpec,
    FieldKind, OperatorMatrix, Smearing,
};
use crate::freeham::{
    build_1p, build_2p, mixing_diagnostics, time_grid, EvolutionTrace, MixingReport, Spectrum,
};
use crate::partitions::{
    bell_numbers, enumerate_partitions, indicator_b, join, membership_c, refines_leq, Config,
    IndexSet, Permutation, Permute,
};
use crate::rng::seeded;
use crate::scalar::{cabs, Cplx};
use crate::space::{ComponentVector, FockSpace, Lattice, SectorSpace, WeightedVector};

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity being checked.
    pub paper_anchor: String,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual <= bound`.
    pub fn upper(name: impl Into<String>, anchor: &str, residual: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            residual,
            bound,
            pass: residual <= bound,
        }
    }

    /// Passes when `value > threshold`; the value is stored as the residual.
    pub fn lower(name: impl Into<String>, anchor: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            residual: value,
            bound: threshold,
            pass: value > threshold,
        }
    }
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Counts exhaustive violations as the residual of a zero-bound check.
fn count(violations: usize) -> f64 {
    violations as f64
}

/// Combinatorial and measure identities on a lattice of `l` sites, for
/// sectors up to `min(n_max, 4)`.
pub fn verify_partitions(l: usize, n_max: usize, seed: u64) -> Result<Vec<Check>> {
    let lattice = Lattice::new(l)?;
    let n_top = n_max.min(4);
    let mut rng = seeded(seed);
    let mut checks = Vec::new();

    let bells = bell_numbers(5);
    let counted: Vec<u64> = (0..=5)
        .map(|n| enumerate_partitions(&IndexSet::range(n)).map(|p| p.len() as u64))
        .collect::<Result<_>>()?;
    let bad = bells.iter().zip(&counted).filter(|(a, b)| a != b).count()
        + usize::from(bells != [1, 1, 2, 5, 15, 52]);
    checks.push(Check::upper(
        "partitions.bell_counts",
        "|𝔎_N| = Bell(|N|)",
        count(bad),
        0.0,
    ));

    let mut refine_bad = 0;
    let mut join_bad = 0;
    let mut plane_bad = 0;
    let mut ind_perm_bad = 0;
    let mut ind_prod_bad = 0;
    for n in 1..=n_top {
        let sector = SectorSpace::canonical(lattice, n)?;
        let ground = sector.indices().clone();
        let parts = enumerate_partitions(&ground)?;
        let configs: Vec<Config> = (0..sector.config_dim()).map(|c| sector.config(c)).collect();
        let perms = Permutation::all(&ground);
        let subsets: Vec<IndexSet> = ground.subsets().filter(|s| !s.is_empty()).collect();
        if n <= 3 {
            for p1 in &parts {
                for p2 in &parts {
                    let contained = configs.iter().all(|x| {
                        !membership_c(p2, x).unwrap() || membership_c(p1, x).unwrap()
                    });
                    if refines_leq(p1, p2)? != contained {
                        refine_bad += 1;
                    }
                    let j = join(p1, p2)?;
                    for x in &configs {
                        if membership_c(&j, x)? != (membership_c(p1, x)? && membership_c(p2, x)?) {
                            join_bad += 1;
                        }
                    }
                }
            }
            for sigma in &perms {
                let inv = sigma.inverse();
                for i in &subsets {
                    let si = i.permuted(sigma)?;
                    for x in &configs {
                        let fx = x.permuted(sigma)?;
                        let on_plane = |s: &IndexSet, y: &Config| {
                            let v = y.site(s.as_slice()[0]);
                            s.iter().all(|k| y.site(k) == v)
                        };
                        if on_plane(i, x) != on_plane(&si, &fx) {
                            plane_bad += 1;
                        }
                        if indicator_b(i, &x.permuted(&inv)?)? != indicator_b(&si, x)? {
                            ind_perm_bad += 1;
                        }
                    }
                }
            }
        }
        for i in &subsets {
            let rest_i = ground.difference(i);
            for j in rest_i.subsets().filter(|s| !s.is_empty()) {
                let rest_j = ground.difference(&j);
                for x in &configs {
                    let a = indicator_b(i, x)? && indicator_b(&j, &x.project(&rest_i)?)?;
                    let b = indicator_b(i, &x.project(&rest_j)?)? && indicator_b(&j, x)?;
                    let c = indicator_b(i, x)? && indicator_b(&j, x)?;
                    if a != b || b != c {
                        ind_prod_bad += 1;
                    }
                }
            }
        }
    }
    checks.push(Check::upper(
        "partitions.refinement_is_plane_containment",
        "𝒫_1 > 𝒫_2 ⇔ C_𝒫1 ⊂ C_𝒫2",
        count(refine_bad),
        0.0,
    ));
    checks.push(Check::upper(
        "partitions.join_is_plane_intersection",
        "C_𝒫1 ∩ C_𝒫2 = C_{𝒫1 ∨ 𝒫2}",
        count(join_bad),
        0.0,
    ));
    checks.push(Check::upper(
        "partitions.plane_covariance",
        "f_σ(C_I) = C_σ(I)",
        count(plane_bad),
        0.0,
    ));
    checks.push(Check::upper(
        "partitions.indicator_covariance",
        "1^N_I · f_σ^-1 = 1^N_σ(I)",
        count(ind_perm_bad),
        0.0,
    ));
    checks.push(Check::upper(
        "partitions.indicator_products",
        "1^N_I 1^{N∖I}_J = 1^{N∖J}_I 1^N_J = 1^N_I 1^N_J",
        count(ind_prod_bad),
        0.0,
    ));

    // integration against the block measures, in component form
    let mut block_int = 0.0f64;
    let mut full_int = 0.0f64;
    for n in 1..=n_top {
        let sector = SectorSpace::canonical(lattice, n)?;
        let ground = sector.indices().clone();
        let h = ComponentVector::<f64>::random(&sector, &mut rng);
        let subsets: Vec<IndexSet> = ground.subsets().filter(|s| !s.is_empty()).collect();
        for i in &subsets {
            for j in &subsets {
                let lhs = h.mask_block(i)?.integrate_block(j)?;
                let rhs = if i.is_disjoint(j) {
                    h.integrate_block(j)?.mask_block(i)?
                } else if i == j {
                    h.integrate_block(j)?
                } else {
                    ComponentVector::zeros(lhs.space())
                };
                block_int = block_int.max(lhs.sub(&rhs)?.max_abs());
            }
            let lhs = h.mask_block(i)?.integrate();
            let rhs = h.integrate_block(i)?.integrate();
            full_int = full_int.max(cabs(lhs - rhs));
        }
    }
    checks.push(Check::upper(
        "partitions.block_integration",
        "∫ 1^N_I h dμ_J = 1^{N∖J}_I ∫ h dμ_J (I∩J=∅); ∫ h dμ_J (I=J); 0",
        block_int,
        1e-12,
    ));
    checks.push(Check::upper(
        "partitions.indicator_integration",
        "∫ 1^N_I h dμ^⊙N = ∫ h dμ_I dμ^⊙(N∖I)",
        full_int,
        1e-12,
    ));

    // measure decomposition and permutations on weighted sectors
    let mut parseval = 0.0f64;
    let mut plane_sum = 0.0f64;
    let mut strata_bad = 0;
    let mut measure_bad = 0;
    let mut unitarity = 0.0f64;
    let mut composition = 0.0f64;
    let mut projector = 0.0f64;
    let mut commute = 0.0f64;
    for n in 1..=n_top.min(3) {
        let sector = SectorSpace::canonical(lattice, n)?;
        let perms = Permutation::all(sector.indices());
        for _ in 0..20 {
            let a = WeightedVector::<f64>::random(&sector, &mut rng);
            let b = WeightedVector::<f64>::random(&sector, &mut rng);
            let w = a.inner_product(&b)?;
            parseval = parseval.max(cabs(w - a.decompose().inner_product(&b.decompose())?));
            plane_sum = plane_sum.max(cabs(w - a.plane_sum_inner_product(&b)?));
            let sa = a.symmetrize();
            projector = projector.max(
                cabs(sa.inner_product(&b)? - a.inner_product(&b.symmetrize())?)
                    .max(max_diff(&sa.symmetrize(), &sa)),
            );
            for s1 in &perms {
                let ua = a.permute(s1)?;
                unitarity = unitarity.max(cabs(ua.inner_product(&ua.clone())? - a.inner_product(&a)?));
                commute = commute.max(max_diff(&sa.permute(s1)?, &sa));
                commute = commute.max(max_diff(&ua.symmetrize(), &sa));
            }
            let s1 = &perms[rng.random_range(0..perms.len())];
            let s2 = &perms[rng.random_range(0..perms.len())];
            composition = composition.max(max_diff(
                &a.permute(s2)?.permute(s1)?,
                &a.permute(&s1.compose(s2)?)?,
            ));
        }
        let strata = sector.strata();
        let mut covered = vec![0usize; sector.config_dim()];
        for stratum in &strata {
            for &c in stratum {
                covered[c] += 1;
            }
        }
        strata_bad += covered.iter().filter(|&&c| c != 1).count();
        for _ in 0..10 {
            let delta: Vec<usize> = (0..sector.config_dim())
                .filter(|_| rng.random_bool(0.5))
                .collect();
            for sigma in &perms {
                let image: Vec<usize> = delta
                    .iter()
                    .map(|&c| sector.config_index(sector.config(c).permuted(sigma).unwrap().sites()))
                    .collect();
                for p in sector.partitions() {
                    if sector.measure_of(p, &delta)? != sector.measure_of(&p.permuted(sigma)?, &image)? {
                        measure_bad += 1;
                    }
                }
                if sector.coincidence_measure(&delta) != sector.coincidence_measure(&image) {
                    measure_bad += 1;
                }
            }
        }
    }
    checks.push(Check::upper(
        "space.component_parseval",
        "⟨Φ|Ψ⟩ = Σ_𝒫 ∫_C𝒫 Φ* Ψ dν_𝒫",
        parseval.max(plane_sum),
        1e-12,
    ));
    checks.push(Check::upper(
        "space.strata_partition_configurations",
        "the sets B_𝒫 form a partition of X^N",
        count(strata_bad),
        0.0,
    ));
    checks.push(Check::upper(
        "space.measure_invariance",
        "μ_𝒫(Δ) = μ_σ(𝒫)[f_σ(Δ)]",
        count(measure_bad),
        0.0,
    ));
    checks.push(Check::upper(
        "space.permutation_unitarity",
        "‖U_σ Ψ‖ = ‖Ψ‖",
        unitarity,
        1e-12,
    ));
    checks.push(Check::upper(
        "space.permutation_composition",
        "U_σ1 U_σ2 = U_σ1·σ2",
        composition,
        1e-12,
    ));
    checks.push(Check::upper(
        "space.symmetrizer_projector",
        "S² = S, S† = S",
        projector,
        1e-12,
    ));
    checks.push(Check::upper(
        "space.symmetrizer_commutes",
        "U_σ S = S U_σ = S",
        commute,
        1e-12,
    ));
    Ok(checks)
}

fn max_diff(a: &WeightedVector<f64>, b: &WeightedVector<f64>) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Field-operator identities on the truncated Fock space over `l` sites.
pub fn verify_algebra(
    l: usize,
    n_max: usize,
    k_max: usize,
    h_max: usize,
    seed: u64,
) -> Result<Vec<Check>> {
    let lattice = Lattice::new(l)?;
    let space = FockSpace::new(lattice, n_max)?;
    let mut rng = seeded(seed);
    if k_max == 0 || h_max == 0 {
        return Err(Error::BadParameter("field orders must be at least 1".into()));
    }
    if k_max.max(h_max) > n_max {
        return Err(Error::TruncationExceeded(k_max.max(h_max), n_max));
    }
    let mut checks = Vec::new();
    let orders = k_max.max(h_max);

    for k in 1..=k_max {
        // adjointness at every site
        let mut adj = 0.0f64;
        for x in 0..l {
            let e = Smearing::point(lattice, x)?;
            for n in 0..=n_max.saturating_sub(k) {
                let plus = OperatorMatrix::field(FieldKind::Create, k, &e, n)?;
                let minus = OperatorMatrix::field(FieldKind::Annihilate, k, &e, n + k)?;
                adj = adj.max(frobenius(
                    &(plus.symmetric_restriction() - minus.symmetric_restriction().adjoint()),
                ));
            }
        }
        checks.push(Check::upper(
            format!("fieldops.adjoint_k{k}"),
            "⟨φ_+^k(x)Φ|Ψ⟩ = ⟨Φ|φ_-^k(x)Ψ⟩",
            adj,
            1e-12,
        ));

        let f = Smearing::<f64>::random(lattice, &mut rng);
        let phi = field_matrix(&space, k, &f)?;
        checks.push(Check::upper(
            format!("fieldops.field_symmetric_k{k}"),
            "φ^k(f) = φ_+^k(f) + φ_-^k(f) is symmetric on 𝒢_0",
            phi.self_adjointness_residual(),
            1e-12,
        ));
        checks.push(Check::upper(
            format!("fieldops.sector_band_k{k}"),
            "φ_±^k maps sector n to n ± k",
            phi.off_band(&[k as isize, -(k as isize)]),
            0.0,
        ));

        // norm bounds
        let (mut minus_excess, mut plus_excess, mut unsym_dev) = (0.0f64, 0.0f64, 0.0f64);
        for n in 0..=n_max.saturating_sub(k) {
            let up = (fact(n + k) / fact(n)).sqrt() * f.norm();
            let minus = OperatorMatrix::field(FieldKind::Annihilate, k, &f, n + k)?;
            let plus = OperatorMatrix::field(FieldKind::Create, k, &f, n)?;
            let unsym = OperatorMatrix::field(FieldKind::CreateUnsym, k, &f, n)?;
            let sm = minus.singular_values()[0];
            let sp = plus.symmetric_singular_values()[0];
            minus_excess = minus_excess.max((sm - up) / up);
            plus_excess = plus_excess.max((sp - up) / up);
            for s in unsym.singular_values() {
                unsym_dev = unsym_dev.max((s / up - 1.0).abs());
            }
        }
        checks.push(Check::upper(
            format!("fieldops.annihilation_bound_k{k}"),
            "‖φ_-^k(f)Ψ_n‖ ≤ sqrt(n!/(n−k)!) ‖f‖ ‖Ψ_n‖",
            minus_excess.max(0.0),
            1e-10,
        ));
        checks.push(Check::upper(
            format!("fieldops.creation_bound_k{k}"),
            "‖φ_+^k(f)Ψ_n‖ ≤ sqrt((n+k)!/n!) ‖f‖ ‖Ψ_n‖",
            plus_excess.max(0.0),
            1e-10,
        ));
        checks.push(Check::upper(
            format!("fieldops.unsymmetrized_norm_k{k}"),
            "‖ψ_+^k(f)Ψ_N‖² = (n+k)!/n! ‖f‖² ‖Ψ_N‖²",
            unsym_dev,
            1e-10,
        ));
    }

    for k in 1..=k_max {
        for h in 1..=h_max {
            if k + h > n_max {
                continue;
            }
            let f = Smearing::<f64>::random(lattice, &mut rng);
            let g = Smearing::<f64>::random(lattice, &mut rng);
            let r = commutator_check(&space, k, h, &f, &g)?;
            checks.push(Check::upper(
                format!("fieldops.commutator_k{k}_h{h}"),
                "[φ_-^k(f), φ_+^h(g)] = δ_kh h! ⟨f|g⟩",
                r.mixed,
                1e-10,
            ));
            checks.push(Check::upper(
                format!("fieldops.commutator_zero_k{k}_h{h}"),
                "[φ_-^k(f), φ_-^h(g)] = [φ_+^k(f), φ_+^h(g)] = 0",
                r.annihilators.max(r.creators),
                1e-12,
            ));
        }
    }

    let mut equiv = 0.0f64;
    let mut pairing = 0.0f64;
    let mut sym_out = 0.0f64;
    for h in 1..=orders {
        for k in 1..=orders {
            for n in 0..=n_max {
                if n + h < k || n + h - k > n_max {
                    continue;
                }
                let sector = SectorSpace::canonical(lattice, n)?;
                let target = SectorSpace::canonical(lattice, (n + h).saturating_sub(k))?;
                for _ in 0..5 {
                    let psi = ComponentVector::<f64>::random_symmetric(&sector, &mut rng);
                    let direct = interaction_direct(h, k, &psi)?;
                    let composed = interaction_composed(h, k, &psi)?;
                    equiv = equiv.max(direct.sub(&composed)?.max_abs());
                    sym_out = sym_out.max(direct.asymmetry());
                    if k <= n {
                        let phi = ComponentVector::<f64>::random(&sector, &mut rng);
                        let chi = ComponentVector::<f64>::random(&target, &mut rng);
                        let lhs = interaction_unsym(h, k, &phi)?.inner_product(&chi)?;
                        let rhs = phi.inner_product(&interaction_unsym(k, h, &chi)?)?;
                        pairing = pairing.max(cabs(lhs - rhs));
                    }
                }
            }
        }
    }
    checks.push(Check::upper(
        "fieldops.interaction_closed_form",
        "[H^h_k Ψ_N](x_M) = [S G^h_k Ψ_N](x_M)",
        equiv,
        1e-12,
    ));
    checks.push(Check::upper(
        "fieldops.interaction_pairing",
        "⟨G^h_k Φ_N|Ψ_M⟩ = ⟨Φ_N|G^k_h Ψ_M⟩",
        pairing,
        1e-12,
    ));
    checks.push(Check::upper(
        "fieldops.interaction_symmetric_output",
        "H^h_k maps symmetric vectors to symmetric vectors",
        sym_out,
        1e-12,
    ));

    let hi = build_interaction_hamiltonian::<f64>(&space, &CouplingSpec::pair_creation(1.0))?;
    checks.push(Check::upper(
        "fieldops.interaction_hamiltonian_symmetric",
        "H_I = e (H²_1 + H¹_2) is symmetric",
        hi.self_adjointness_residual(),
        1e-12,
    ));

    if n_max >= 2 {
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let psi1 = ComponentVector::<f64>::random(&SectorSpace::canonical(lattice, 1)?, &mut rng);
            let psi2 = interaction_direct(2, 1, &psi1)?;
            worst = worst.max((psi2.norm_sqr() - 2.0 * psi1.norm_sqr()).abs() / psi1.norm_sqr());
        }
        checks.push(Check::upper(
            "fieldops.pair_creation_norm",
            "Ψ_2 = ∫ φ_+²(x) φ_-(x) dx Ψ_1 has ‖Ψ_2‖² = 2‖Ψ_1‖²",
            worst,
            1e-12,
        ));
    }

    let mut overlap = 0.0f64;
    let vac = ComponentVector::from_amplitudes(
        &SectorSpace::canonical(lattice, 0)?,
        vec![Cplx::new(1.0, 0.0)],
    )?;
    for _ in 0..5 {
        let f = Smearing::<f64>::random(lattice, &mut rng);
        let g = Smearing::<f64>::random(lattice, &mut rng);
        let lhs = create(1, &f, &vac)?.inner_product(&create(1, &g, &vac)?)?;
        overlap = overlap.max(cabs(lhs - f.inner_product(&g)));
    }
    checks.push(Check::upper(
        "fieldops.one_particle_overlap",
        "⟨φ_+(f)Ψ_0|φ_+(g)Ψ_0⟩ = ⟨f|g⟩",
        overlap,
        1e-12,
    ));

    let mut beyond = 0.0f64;
    for n in 0..=n_max {
        let psi = ComponentVector::<f64>::random(&SectorSpace::canonical(lattice, n)?, &mut rng);
        let f = Smearing::<f64>::random(lattice, &mut rng);
        for k in n + 1..=n + 2 {
            beyond = beyond.max(annihilate(k, &f, &psi)?.max_abs());
        }
    }
    checks.push(Check::upper(
        "fieldops.annihilation_beyond_sector",
        "φ_-^k(x)Ψ_n := 0 for k > n",
        beyond,
        0.0,
    ));

    let probe_space = FockSpace::new(Lattice::new(2)?, 2)?;
    let probe = vacuum_cyclicity::<f64>(&probe_space, 2)?;
    checks.push(Check::upper(
        "fieldops.vacuum_cyclicity_rank_deficit",
        "the vacuum is cyclic for {φ^k(f)}",
        (probe.full_dimension - probe.rank) as f64,
        0.0,
    ));
    Ok(checks)
}

/// Spectral checks of the one-particle pencil.
pub fn verify_spectrum(
    j: usize,
    r: f64,
    lambda: f64,
    mass: f64,
) -> Result<(Spectrum<f64>, Vec<Check>)> {
    let p = build_1p::<f64>(j, r, lambda, mass)?;
    let s = p.spectrum()?;
    let mut checks = vec![
        Check::upper(
            "freeham.stiffness_symmetric",
            "Δ̄_λ is symmetric on D̄",
            p.pencil().asymmetry(),
            0.0,
        ),
        Check::upper(
            "freeham.spectrum_nonnegative",
            "Δ̄_λ is positive on D̄",
            (-s.values[0]).max(0.0),
            1e-10,
        ),
        Check::upper(
            "freeham.eigen_residual",
            "K v = E M v",
            s.max_residual(p.pencil()),
            1e-8,
        ),
        Check::upper(
            "freeham.eigenvectors_m_orthonormal",
            "v_i^† M v_j = δ_ij",
            s.orthonormality_defect(p.pencil()),
            1e-10,
        ),
        Check::upper(
            "freeham.eigenvalue_count",
            "dim = J",
            (s.values.len() as f64 - j as f64).abs(),
            0.0,
        ),
    ];
    let min_e = s.values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    checks.push(Check::upper(
        "freeham.eigenvalues_sorted",
        "E_0 ≤ E_1 ≤ …",
        (s.values[0] - min_e).abs(),
        0.0,
    ));
    Ok((s, checks))
}

/// Evolution of the point-node state and its conservation checks.
pub fn verify_evolution(
    j: usize,
    r: f64,
    lambda: f64,
    mass: f64,
    t_max: f64,
    steps: usize,
) -> Result<(EvolutionTrace<f64>, Vec<Check>)> {
    let p = build_1p::<f64>(j, r, lambda, mass)?;
    let times = time_grid(t_max, steps)?;
    let psi0 = p.singular_start();
    let trace = p.evolve(&psi0, &times)?;
    let s = p.spectrum()?;
    let c = s.expand(p.pencil(), &psi0);
    let start = s.state_at(&c, mass, 0.0);
    let split = (0..times.len())
        .map(|i| (trace.norm_singular[i] + trace.norm_regular[i] - trace.norm_total[i]).abs())
        .fold(0.0, f64::max);
    let first_positive = trace
        .norm_regular
        .iter()
        .zip(&trace.times)
        .filter(|(_, &t)| t > 0.0)
        .map(|(n, _)| *n)
        .fold(f64::INFINITY, f64::min);
    let checks = vec![
        Check::upper(
            "freeham.norm_conservation",
            "e^{−iHt} is unitary",
            trace.norm_drift(),
            1e-10,
        ),
        Check::upper(
            "freeham.initial_state",
            "ψ(0) = ψ_0",
            (start - DVector::from(psi0.clone())).norm(),
            1e-12,
        ),
        Check::upper(
            "freeham.norm_split",
            "‖ψ‖² = ‖ψ_singular‖² + ‖ψ_regular‖²",
            split,
            1e-12,
        ),
        Check::lower(
            "freeham.regular_component_populated",
            "e^{−iHt}(0,1) ≠ (0,c(t))",
            first_positive,
            1e-6,
        ),
    ];
    Ok((trace, checks))
}

/// Component-mixing diagnostics, the decoupled control and a coupling sweep.
pub fn verify_mixing(
    j: usize,
    r: f64,
    lambda: f64,
    mass: f64,
) -> Result<(MixingReport, Vec<(f64, f64)>, Vec<Check>)> {
    let p = build_1p::<f64>(j, r, lambda, mass)?;
    let report = mixing_diagnostics(&p)?;
    let control = mixing_diagnostics(&p.decoupled())?;
    let sweep = [0.5, 1.0, 2.0]
        .iter()
        .map(|&l| Ok((l, mixing_diagnostics(&build_1p::<f64>(j, r, l, mass)?)?.min_angle)))
        .collect::<Result<Vec<_>>>()?;
    let checks = vec![
        Check::lower(
            "freeham.point_state_not_eigenvector",
            "(0, 1) is not an eigenvector of H",
            report.min_angle,
            1e-4,
        ),
        Check::upper(
            "freeham.decoupled_control_angle",
            "decoupled origin node: e_0 is an eigenvector",
            control.min_angle,
            1e-6,
        ),
    ];
    Ok((report, sweep, checks))
}

/// Two-particle pencil: symmetry, positivity and the center-mode split.
pub fn verify_two_particle(
    j: usize,
    r: f64,
    lc: usize,
    lambda: f64,
    mass: f64,
) -> Result<(Spectrum<f64>, Vec<Check>)> {
    let p = build_2p::<f64>(j, r, lc, lambda, mass)?;
    let s = p.spectrum()?;
    let modes = p.mode_spectrum()?;
    let split = s
        .values
        .iter()
        .zip(&modes)
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    let checks = vec![
        Check::upper(
            "freeham.two_particle_symmetric",
            "Δ̄^(2) is symmetric on D̄^(2)",
            p.pencil().asymmetry(),
            1e-10,
        ),
        Check::upper(
            "freeham.two_particle_nonnegative",
            "Δ̄^(2) is positive on D̄^(2)",
            (-s.values[0]).max(0.0),
            1e-10,
        ),
        Check::upper(
            "freeham.two_particle_center_modes",
            "K2 = K ⊗ Mc + M ⊗ Kc splits over center modes",
            split,
            1e-8,
        ),
    ];
    Ok((s, checks))
}
