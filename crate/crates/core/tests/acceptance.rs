//! Acceptance suite: one line per criterion, non-zero exit if a criterion
//! that gates the build fails. Run with `cargo test --test acceptance`.
//!
//! Every expected value is produced by a brute-force oracle written here,
//! independently of the library code paths it checks.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use coinfock::fieldops::{
    annihilate, build_interaction_hamiltonian, commutator_check, create, create_unsym,
    interaction_composed, interaction_direct, vacuum_cyclicity, CouplingSpec, CouplingTerm,
    FieldKind, OperatorMatrix, Smearing,
};
use coinfock::freeham::{build_1p, build_2p, mixing_diagnostics, time_grid};
use coinfock::partitions::{
    enumerate_partitions, indicator_b, Config, IndexSet, Partition, Permutation, Permute,
};
use coinfock::rng::seeded;
use coinfock::space::{ComponentVector, FockSpace, Lattice, SectorSpace, WeightedVector};
use coinfock::C64;

/// `norm_regular(t = 1)` for `(J, R, λ, m) = (200, 10, 1, 1)` starting from
/// the point-node state, as produced by the matrix-exponential oracle below.
const RECORDED_NORM_REGULAR_T1: f64 = 0.6639896789;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn lat(l: usize) -> Lattice {
    Lattice::new(l).unwrap()
}

fn set(v: &[usize]) -> IndexSet {
    IndexSet::new(v.iter().copied()).unwrap()
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `1^N_I(x)` straight from the biconditional: for `i ∈ I` and any other
/// index `j`, `j ∈ I` exactly when `x_j = x_i`.
fn oracle_indicator(subset: &[usize], ground: &[usize], sites: &[usize]) -> bool {
    let pos = |i: usize| ground.iter().position(|&g| g == i).unwrap();
    subset.iter().all(|&i| {
        ground
            .iter()
            .filter(|&&j| j != i)
            .all(|&j| subset.contains(&j) == (sites[pos(i)] == sites[pos(j)]))
    })
}

/// All configurations of `n` sites in mixed-radix order.
fn all_sites(l: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..l).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

fn nonempty_subsets(ground: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << ground.len()))
        .map(|m| {
            ground
                .iter()
                .enumerate()
                .filter(|(b, _)| m & (1 << b) != 0)
                .map(|(_, &g)| g)
                .collect()
        })
        .collect()
}

/// Component element keyed by its blocks (sorted) and their sites.
type Key = Vec<(Vec<usize>, usize)>;

fn key_of(p: &Partition, v: &[usize]) -> Key {
    let mut k: Key = p
        .blocks()
        .iter()
        .map(|b| b.as_slice().to_vec())
        .zip(v.iter().copied())
        .collect();
    k.sort();
    k
}

fn table(h: &ComponentVector<f64>) -> HashMap<Key, C64> {
    let s = h.space();
    (0..s.component_dim())
        .map(|idx| {
            let (pid, v) = s.component_element(idx);
            (key_of(&s.partitions()[pid], &v), h.amplitudes()[idx])
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let l = 3;
    let mut violations = 0usize;
    let mut checked = 0usize;
    let mut worst_integral = 0.0f64;
    let mut rng = seeded(101);
    for n in 1..=4 {
        let ground: Vec<usize> = (1..=n).collect();
        let gset = IndexSet::range(n);
        let subsets = nonempty_subsets(&ground);
        let perms = Permutation::all(&gset);
        let configs = all_sites(l, n);
        // point 1: 1^N_I ∘ f_σ⁻¹ = 1^N_σ(I)
        for sigma in &perms {
            let inv = sigma.inverse();
            for i in &subsets {
                let iset = set(i);
                let si = iset.permuted(sigma).unwrap();
                for x in &configs {
                    let cfg = Config::new(gset.clone(), x.clone()).unwrap();
                    let moved = cfg.permuted(&inv).unwrap();
                    // f_σ⁻¹(x) = x ∘ σ, written out by hand
                    let by_hand: Vec<usize> = ground
                        .iter()
                        .map(|&k| x[sigma.apply(k).unwrap() - 1])
                        .collect();
                    let lhs = oracle_indicator(i, &ground, &by_hand);
                    let rhs = oracle_indicator(si.as_slice(), &ground, x);
                    checked += 1;
                    if lhs != rhs
                        || moved.sites() != by_hand.as_slice()
                        || indicator_b(&iset, &moved).unwrap() != lhs
                    {
                        violations += 1;
                    }
                }
            }
        }
        // point 4: products of indicators, disjoint I, J
        for i in &subsets {
            for j in &subsets {
                if i.iter().any(|a| j.contains(a)) {
                    continue;
                }
                let not_i: Vec<usize> = ground.iter().copied().filter(|g| !i.contains(g)).collect();
                let not_j: Vec<usize> = ground.iter().copied().filter(|g| !j.contains(g)).collect();
                for x in &configs {
                    let proj = |keep: &[usize]| -> Vec<usize> {
                        keep.iter().map(|&k| x[k - 1]).collect()
                    };
                    let a = oracle_indicator(i, &ground, x)
                        && oracle_indicator(j, &not_i, &proj(&not_i));
                    let b = oracle_indicator(i, &not_j, &proj(&not_j))
                        && oracle_indicator(j, &ground, x);
                    let c = oracle_indicator(i, &ground, x) && oracle_indicator(j, &ground, x);
                    let lib = indicator_b(&set(i), &Config::new(gset.clone(), x.clone()).unwrap())
                        .unwrap()
                        && indicator_b(&set(j), &Config::new(gset.clone(), x.clone()).unwrap())
                            .unwrap();
                    checked += 1;
                    if a != b || b != c || c != lib {
                        violations += 1;
                    }
                }
            }
        }
        // points 2 and 3 in component form: a generic point of component P has
        // one distinct site per block, so 1^N_I is one iff I is a block of P
        let sector = SectorSpace::canonical(lat(l), n).unwrap();
        let h = ComponentVector::<f64>::random(&sector, &mut rng);
        let ht = table(&h);
        let generic_indicator = |i: &[usize], key: &Key| -> bool {
            let g: Vec<usize> = key.iter().flat_map(|(b, _)| b.iter().copied()).collect();
            let mut gs = g.clone();
            gs.sort();
            let labels: Vec<usize> = gs
                .iter()
                .map(|idx| key.iter().position(|(b, _)| b.contains(idx)).unwrap())
                .collect();
            oracle_indicator(i, &gs, &labels)
        };
        for i in &subsets {
            for j in &subsets {
                let rest: Vec<usize> = ground.iter().copied().filter(|g| !j.contains(g)).collect();
                let lhs = h.mask_block(&set(i)).unwrap().integrate_block(&set(j)).unwrap();
                let rs = lhs.space().clone();
                for idx in 0..rs.component_dim() {
                    let (qid, y) = rs.component_element(idx);
                    let q = &rs.partitions()[qid];
                    let mut oracle = C64::new(0.0, 0.0);
                    for s in 0..l {
                        let mut key = key_of(q, &y);
                        key.push((j.clone(), s));
                        key.sort();
                        if generic_indicator(i, &key) {
                            oracle += ht[&key];
                        }
                    }
                    // three-case right-hand side
                    let disjoint = !i.iter().any(|a| j.contains(a));
                    let rhs = if disjoint {
                        let qkey = key_of(q, &y);
                        let on = !rest.is_empty() && generic_indicator(i, &qkey);
                        let mut sum = C64::new(0.0, 0.0);
                        for s in 0..l {
                            let mut key = key_of(q, &y);
                            key.push((j.clone(), s));
                            key.sort();
                            sum += ht[&key];
                        }
                        if on {
                            sum
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    } else if i == j {
                        (0..l)
                            .map(|s| {
                                let mut key = key_of(q, &y);
                                key.push((j.clone(), s));
                                key.sort();
                                ht[&key]
                            })
                            .sum()
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    worst_integral = worst_integral
                        .max((oracle - rhs).norm())
                        .max((oracle - lhs.amplitudes()[idx]).norm());
                    checked += 1;
                }
            }
            // point 3: ∫ 1^N_I h dμ^⊙N = ∫ h dμ_I dμ^⊙(N∖I)
            let lhs: C64 = ht
                .iter()
                .filter(|(k, _)| generic_indicator(i, k))
                .map(|(_, v)| *v)
                .sum();
            let rhs: C64 = ht
                .iter()
                .filter(|(k, _)| k.iter().any(|(b, _)| b == i))
                .map(|(_, v)| *v)
                .sum();
            let lib = h.mask_block(&set(i)).unwrap().integrate();
            worst_integral = worst_integral.max((lhs - rhs).norm()).max((lhs - lib).norm());
            checked += 1;
        }
    }
    if worst_integral > 1e-12 {
        violations += 1;
    }
    outcome(
        violations == 0,
        format!("{violations} violations in {checked} cases, integral residual {worst_integral:.1e}"),
    )
}

/// `Σ_x w(x) conj(a) b` with `w(x)` counted partition by partition.
fn oracle_weighted(a: &WeightedVector<f64>, b: &WeightedVector<f64>, l: usize, n: usize) -> C64 {
    let parts = enumerate_partitions(&IndexSet::range(n)).unwrap();
    let mut acc = C64::new(0.0, 0.0);
    for p in &parts {
        for x in all_sites(l, n) {
            let on = p.blocks().iter().all(|blk| {
                let s = x[blk.as_slice()[0] - 1];
                blk.iter().all(|i| x[i - 1] == s)
            });
            if on {
                acc += a.at(&x).conj() * b.at(&x);
            }
        }
    }
    acc
}

fn criterion_2() -> Outcome {
    let mut rng = seeded(202);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    let cases: Vec<(usize, usize)> = (1..=3).flat_map(|n| (1..=4).map(move |l| (l, n))).collect();
    for t in 0..1000 {
        let (l, n) = cases[t % cases.len()];
        let s = SectorSpace::canonical(lat(l), n).unwrap();
        let a = WeightedVector::<f64>::random(&s, &mut rng);
        let b = WeightedVector::<f64>::random(&s, &mut rng);
        let w = a.inner_product(&b).unwrap();
        let comp = a.decompose().inner_product(&b.decompose()).unwrap();
        let oracle = oracle_weighted(&a, &b, l, n);
        worst = worst.max((w - oracle).norm()).max((comp - oracle).norm());
        pairs += 1;
    }
    outcome(worst <= 1e-12, format!("{pairs} pairs, max residual {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let l = 3;
    let mut violations = 0;
    let mut worst = 0.0f64;
    let mut rng = seeded(303);
    for n in 1..=3 {
        let gset = IndexSet::range(n);
        let s = SectorSpace::canonical(lat(l), n).unwrap();
        let parts = enumerate_partitions(&gset).unwrap();
        for sigma in Permutation::all(&gset) {
            // the measure is additive, so invariance on every point covers every Δ
            for x in all_sites(l, n) {
                let fx: Vec<usize> = (1..=n)
                    .map(|i| x[sigma.inverse().apply(i).unwrap() - 1])
                    .collect();
                for p in &parts {
                    let sp = p.permuted(&sigma).unwrap();
                    let on = |q: &Partition, y: &[usize]| {
                        q.blocks().iter().all(|b| {
                            let v = y[b.as_slice()[0] - 1];
                            b.iter().all(|i| y[i - 1] == v)
                        })
                    };
                    if on(p, &x) != on(&sp, &fx) {
                        violations += 1;
                    }
                }
                let wx = s.weight(s.config_index(&x));
                let wfx = s.weight(s.config_index(&fx));
                let count = parts
                    .iter()
                    .filter(|p| {
                        p.blocks().iter().all(|b| {
                            let v = x[b.as_slice()[0] - 1];
                            b.iter().all(|i| x[i - 1] == v)
                        })
                    })
                    .count() as u64;
                if wx != wfx || wx != count {
                    violations += 1;
                }
            }
            for _ in 0..10 {
                let a = WeightedVector::<f64>::random(&s, &mut rng);
                let b = WeightedVector::<f64>::random(&s, &mut rng);
                let lhs = a.permute(&sigma).unwrap().inner_product(&b.permute(&sigma).unwrap()).unwrap();
                worst = worst.max((lhs - a.inner_product(&b).unwrap()).norm());
                let ca = a.decompose();
                let cb = b.decompose();
                let lhs = ca.permute(&sigma).unwrap().inner_product(&cb.permute(&sigma).unwrap()).unwrap();
                worst = worst.max((lhs - ca.inner_product(&cb).unwrap()).norm());
            }
        }
    }
    outcome(
        violations == 0 && worst <= 1e-12,
        format!("{violations} measure violations, unitarity residual {worst:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = seeded(404);
    let mut worst_vec = 0.0f64;
    let mut worst_mat = 0.0f64;
    for l in 1..=4 {
        for x in 0..l {
            let e = Smearing::<f64>::point(lat(l), x).unwrap();
            for k in 1..=2 {
                for n in 0..=3 {
                    let a = ComponentVector::random_symmetric(
                        &SectorSpace::canonical(lat(l), n).unwrap(),
                        &mut rng,
                    );
                    let b = ComponentVector::random_symmetric(
                        &SectorSpace::canonical(lat(l), n + k).unwrap(),
                        &mut rng,
                    );
                    let lhs = create(k, &e, &a).unwrap().inner_product(&b).unwrap();
                    let rhs = a.inner_product(&annihilate(k, &e, &b).unwrap()).unwrap();
                    worst_vec = worst_vec.max((lhs - rhs).norm());
                    if n + k <= 3 {
                        let plus = OperatorMatrix::field(FieldKind::Create, k, &e, n).unwrap();
                        let minus =
                            OperatorMatrix::field(FieldKind::Annihilate, k, &e, n + k).unwrap();
                        let d = plus.symmetric_restriction()
                            - minus.adjoint_weighted().symmetric_restriction();
                        worst_mat = worst_mat.max(d.iter().fold(0.0f64, |w, z| w.max(z.norm())));
                    }
                }
            }
        }
    }
    let worst = worst_vec.max(worst_mat);
    outcome(
        worst <= 1e-12,
        format!("vector residual {worst_vec:.1e}, matrix residual {worst_mat:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let l = 3;
    let space = FockSpace::new(lat(l), 4).unwrap();
    let mut rng = seeded(505);
    let (mut mixed, mut zero) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let f = Smearing::<f64>::random(lat(l), &mut rng);
        let g = Smearing::<f64>::random(lat(l), &mut rng);
        for k in 1..=2 {
            for h in 1..=2 {
                let r = commutator_check(&space, k, h, &f, &g).unwrap();
                mixed = mixed.max(r.mixed);
                zero = zero.max(r.annihilators).max(r.creators);
                // vector route on every sector where both orderings fit
                let c = if k == h {
                    f.inner_product(&g) * fact(h)
                } else {
                    C64::new(0.0, 0.0)
                };
                for n in 0..=4 - h {
                    let psi = ComponentVector::random_symmetric(
                        &SectorSpace::canonical(lat(l), n).unwrap(),
                        &mut rng,
                    );
                    let ab = annihilate(k, &f, &create(h, &g, &psi).unwrap()).unwrap();
                    if n < k {
                        // φ_-^k(f) Ψ_n = 0, so only the first ordering survives
                        let expected = psi.scale(c);
                        if ab.space().n() == n {
                            mixed = mixed.max(ab.sub(&expected).unwrap().max_abs());
                        }
                        continue;
                    }
                    let ba = create(h, &g, &annihilate(k, &f, &psi).unwrap()).unwrap();
                    let diff = ab.sub(&ba).unwrap().sub(&psi.scale(c).clone_into_space(&ab));
                    mixed = mixed.max(diff.unwrap().max_abs());
                }
            }
        }
    }
    outcome(
        mixed <= 1e-10 && zero <= 1e-12,
        format!("mixed residual {mixed:.1e}, zero-commutator residual {zero:.1e}"),
    )
}

trait IntoSpace {
    fn clone_into_space(&self, like: &ComponentVector<f64>) -> ComponentVector<f64>;
}

impl IntoSpace for ComponentVector<f64> {
    /// The same vector if `like` is in the same sector, else zero there.
    fn clone_into_space(&self, like: &ComponentVector<f64>) -> ComponentVector<f64> {
        if self.space().n() == like.space().n() {
            self.clone()
        } else {
            ComponentVector::zeros(like.space())
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = seeded(606);
    let (mut excess, mut equality) = (0.0f64, 0.0f64);
    for l in 2..=4 {
        for k in 1..=2 {
            for n in 0..=3 {
                let f = Smearing::<f64>::random(lat(l), &mut rng);
                let bound = (fact(n + k) / fact(n)).sqrt() * f.norm();
                let minus = OperatorMatrix::field(FieldKind::Annihilate, k, &f, n + k).unwrap();
                let plus = OperatorMatrix::field(FieldKind::Create, k, &f, n).unwrap();
                let unsym = OperatorMatrix::field(FieldKind::CreateUnsym, k, &f, n).unwrap();
                // annihilation from sector n+k: sqrt((n+k)!/n!) ‖f‖
                let top = |m: DMatrix<C64>| {
                    m.singular_values().iter().copied().fold(0.0f64, f64::max)
                };
                excess = excess
                    .max(top(minus.symmetric_restriction()) / bound - 1.0)
                    .max(top(minus.entries().clone()) / bound - 1.0)
                    .max(top(plus.symmetric_restriction()) / bound - 1.0);
                for s in unsym.entries().singular_values().iter() {
                    equality = equality.max((s / bound - 1.0).abs());
                }
                // and on random vectors, the equality chain itself
                let psi = ComponentVector::random(&SectorSpace::canonical(lat(l), n).unwrap(), &mut rng);
                let out = create_unsym(k, &f, &psi).unwrap();
                let ratio = out.norm_sqr() / (fact(n + k) / fact(n) * f.norm_sqr() * psi.norm_sqr());
                equality = equality.max((ratio - 1.0).abs());
            }
        }
    }
    outcome(
        excess <= 1e-10 && equality <= 1e-10,
        format!("max relative excess {excess:.1e}, unsymmetrized equality residual {equality:.1e}"),
    )
}

fn criterion_7() -> Outcome {
    let l = 3;
    let mut rng = seeded(707);
    let mut equiv = 0.0f64;
    for h in 1..=2 {
        for k in 1..=2 {
            for t in 0..100 {
                let n = t % 4;
                let psi = ComponentVector::<f64>::random_symmetric(
                    &SectorSpace::canonical(lat(l), n).unwrap(),
                    &mut rng,
                );
                let a = interaction_direct(h, k, &psi).unwrap();
                let b = interaction_composed(h, k, &psi).unwrap();
                equiv = equiv.max(a.sub(&b).unwrap().max_abs());
            }
        }
    }
    let space = FockSpace::new(lat(l), 3).unwrap();
    let mut adj = 0.0f64;
    for h in 1..=2 {
        for k in 1..=2 {
            let spec = CouplingSpec::new(vec![CouplingTerm { h, k, coupling: 1.0 }]).unwrap();
            let m = build_interaction_hamiltonian::<f64>(&space, &spec).unwrap();
            adj = adj.max(m.self_adjointness_residual());
            // vector route: ⟨Φ|H^h_k Ψ⟩ = ⟨H^k_h Φ|Ψ⟩
            for n in k..=3 {
                let m_out = n + h - k;
                if m_out > 3 {
                    continue;
                }
                let psi = ComponentVector::<f64>::random_symmetric(
                    &SectorSpace::canonical(lat(l), n).unwrap(),
                    &mut rng,
                );
                let phi = ComponentVector::<f64>::random_symmetric(
                    &SectorSpace::canonical(lat(l), m_out).unwrap(),
                    &mut rng,
                );
                let lhs = phi.inner_product(&interaction_direct(h, k, &psi).unwrap()).unwrap();
                let rhs = interaction_direct(k, h, &phi).unwrap().inner_product(&psi).unwrap();
                adj = adj.max((lhs - rhs).norm());
            }
        }
    }
    // Ψ_2 = Σ_x φ_+²(x) φ_-(x) Ψ_1
    let mut example = 0.0f64;
    for _ in 0..10 {
        let psi1 = ComponentVector::<f64>::random(&SectorSpace::canonical(lat(l), 1).unwrap(), &mut rng);
        let mut psi2 = ComponentVector::zeros(&SectorSpace::canonical(lat(l), 2).unwrap());
        for x in 0..l {
            let e = Smearing::point(lat(l), x).unwrap();
            psi2 = psi2.add(&create(2, &e, &annihilate(1, &e, &psi1).unwrap()).unwrap()).unwrap();
        }
        example = example.max((psi2.norm_sqr() / psi1.norm_sqr() - 2.0).abs());
    }
    outcome(
        equiv <= 1e-12 && adj <= 1e-12 && example <= 1e-12,
        format!(
            "closed form vs composed {equiv:.1e}, self-adjointness {adj:.1e}, ‖Ψ_2‖²/‖Ψ_1‖² − 2 = {example:.1e}"
        ),
    )
}

/// `ψ(t) = M^{-1/2} exp(−i t A / 2m) M^{1/2} ψ_0` with `A = M^{-1/2} K M^{-1/2}`.
fn oracle_evolve(k: &DMatrix<f64>, m: &DVector<f64>, psi0: &DVector<C64>, t: f64, mass: f64) -> DVector<C64> {
    let n = m.len();
    let a = DMatrix::from_fn(n, n, |i, j| k[(i, j)] / (m[i] * m[j]).sqrt());
    let gen = a.map(|x| C64::new(0.0, -x * t / (2.0 * mass)));
    let u = gen.exp();
    let scaled = DVector::from_fn(n, |i, _| psi0[i] * m[i].sqrt());
    let out = u * scaled;
    DVector::from_fn(n, |i, _| out[i] / m[i].sqrt())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let p = build_1p::<f64>(200, 10.0, 1.0, 1.0).unwrap();
    let k = p.pencil().stiffness();
    let m = p.pencil().mass();
    let symmetric = k == &k.transpose();
    let s = p.spectrum().unwrap();
    let min_e = s.values.iter().copied().fold(f64::INFINITY, f64::min);
    let times = time_grid(10.0, 200).unwrap();
    let psi0 = p.singular_start();
    let trace = p.evolve(&psi0, &times).unwrap();
    let drift = trace.norm_drift();
    let angle = mixing_diagnostics(&p).unwrap().min_angle;
    let i1 = times.iter().position(|&t| (t - 1.0).abs() < 1e-12).unwrap();
    let lib_regular = trace.norm_regular[i1];
    let psi1 = oracle_evolve(k, m, &psi0, 1.0, 1.0);
    let oracle_regular: f64 = (1..200).map(|i| psi1[i].norm_sqr() * m[i]).sum();
    let oracle_agrees = (lib_regular - oracle_regular).abs() <= 1e-9
        && (oracle_regular - RECORDED_NORM_REGULAR_T1).abs() <= 1e-9;
    let elapsed = start.elapsed();
    outcome(
        symmetric
            && min_e >= -1e-10
            && drift <= 1e-10
            && angle > 1e-4
            && lib_regular > 1e-6
            && oracle_agrees
            && elapsed < Duration::from_secs(30),
        format!(
            "K symmetric {symmetric}, min E {min_e:.3e}, drift {drift:.1e}, min angle {angle:.3e}, \
             norm_regular(1) {lib_regular:.6} (oracle {oracle_regular:.6}), {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let (j, lc) = (64, 8);
    let p = build_2p::<f64>(j, 10.0, lc, 1.0, 1.0).unwrap();
    let k2 = p.pencil().stiffness();
    let asym = (k2 - k2.transpose()).amax();
    let s = p.spectrum().unwrap();
    let min_e = s.values[0];
    // per-mode oracle: diagonalize the center stiffness numerically, then
    // solve one radial pencil per center eigenvalue
    let kc = p.center_stiffness().clone();
    let kappas = SymmetricEigen::new(kc).eigenvalues;
    let radial = p.radial().pencil();
    let (k, m) = (radial.stiffness(), radial.mass());
    let mut oracle = Vec::new();
    for &kappa in kappas.iter() {
        let a = DMatrix::from_fn(j, j, |r, c| {
            let shifted = k[(r, c)] + if r == c { kappa * m[r] } else { 0.0 };
            shifted / (m[r] * m[c]).sqrt()
        });
        oracle.extend(SymmetricEigen::new(a).eigenvalues.iter().copied());
    }
    oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let split = s
        .values
        .iter()
        .zip(&oracle)
        .fold(0.0f64, |w, (a, b)| w.max((a - b).abs()));
    let elapsed = start.elapsed();
    outcome(
        asym <= 1e-10 && min_e >= -1e-10 && split <= 1e-8 && elapsed < Duration::from_secs(60),
        format!(
            "asymmetry {asym:.1e}, min E {min_e:.3e}, center-mode agreement {split:.1e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_10() -> Outcome {
    let space = FockSpace::new(lat(2), 2).unwrap();
    let r = vacuum_cyclicity::<f64>(&space, 2).unwrap();
    outcome(
        r.is_cyclic(),
        format!(
            "rank {} of {} (by round {:?})",
            r.rank, r.full_dimension, r.rank_by_round
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(usize, &str, fn() -> Outcome, bool); 10] = [
        (1, "partition identities", criterion_1, true),
        (2, "measure decomposition", criterion_2, true),
        (3, "permutation invariance", criterion_3, true),
        (4, "adjointness", criterion_4, true),
        (5, "commutators", criterion_5, true),
        (6, "norm bounds", criterion_6, true),
        (7, "interaction equivalence", criterion_7, true),
        (8, "free hamiltonian", criterion_8, true),
        (9, "two-particle pencil", criterion_9, true),
        (10, "vacuum cyclicity probe", criterion_10, false),
    ];
    let mut failed = 0;
    for (id, name, run, gates) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if gates { "" } else { " [reported]" };
        println!(
            "criterion {id:>2} {tag} {name}{note}: {} ({:.2}s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if gates && !o.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all gating criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} gating criteria failed");
        ExitCode::FAILURE
    }
}
