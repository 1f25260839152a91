//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so the lines always reach the terminal. The
//! process fails on any unexpected FAIL; a FAIL listed in `KNOWN_FAIL` must
//! match its recorded cause exactly or it counts as unexpected too.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nncp_core::baseline::{reynolds_check, solve_spp, SppFlow};
use nncp_core::dp::{centers_to_solution, solve_star_dp};
use nncp_core::lp::{build_gnfp, build_rspp_scaled, simplex_solve, solve_reduced, LpStatus, ReducedMethod};
use nncp_core::random::{random_circuit, InstanceClass};
use nncp_core::reconstruct::{reconstruct, verify};
use nncp_core::symmetry::{quotient_graph, ReductionStats};
use nncp_core::{Circuit, Coupling, Family, NncpSolution};

const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_LIMIT: Duration = Duration::from_secs(30);
const C3_LIMIT: Duration = Duration::from_secs(300);
const C4_LIMIT: Duration = Duration::from_secs(10);
const C7_LIMIT: Duration = Duration::from_secs(300);
const REYNOLDS_TOL: f64 = 1e-9;
const GNFP_TOL: f64 = 1e-6;
const REDUCTION_PCT: u32 = 90;
const SEED: u64 = 20_240_611;

/// Criteria that cannot hold as stated, with the only failures allowed.
const KNOWN_FAIL: &[u32] = &[6];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn report(id: u32, title: &str, pass: bool, elapsed: Duration, detail: String) -> Outcome {
    println!(
        "criterion {id} [{}] {title}: {} ({:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        detail,
        elapsed.as_secs_f64()
    );
    Outcome { id, pass, detail }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Cycle,
    Star,
    Biclique,
}

const KINDS: [Kind; 3] = [Kind::Cycle, Kind::Star, Kind::Biclique];

/// `biclique` means K_{2,n−2}; at n = 4 both sides are equal, so that graph
/// is passed as a general edge list.
fn coupling(kind: Kind, n: usize) -> Coupling {
    match kind {
        Kind::Cycle => Coupling::cycle(n).unwrap(),
        Kind::Star => Coupling::star(n).unwrap(),
        Kind::Biclique if n == 4 => Coupling::general(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap(),
        Kind::Biclique => Coupling::biclique(2, n - 2).unwrap(),
    }
}

fn random_pair(rng: &mut ChaCha8Rng, pool: &[usize]) -> (usize, usize) {
    let two: Vec<usize> = pool.choose_multiple(rng, 2).copied().collect();
    (two[0] + 1, two[1] + 1)
}

/// Gates over all qubits until the fixing pattern is trivial.
fn trivial_circuit(rng: &mut ChaCha8Rng, n: usize, m_max: usize) -> Circuit {
    let all: Vec<usize> = (0..n).collect();
    loop {
        let m = rng.gen_range(n.min(m_max)..=m_max);
        let pairs: Vec<_> = (0..m).map(|_| random_pair(rng, &all)).collect();
        let c = Circuit::from_pairs(n, &pairs).unwrap();
        if c.fixing_pattern().is_trivial() {
            return c;
        }
    }
}

/// Gates confined to small qubit groups, leaving pairs or free qubits.
fn nontrivial_circuit(rng: &mut ChaCha8Rng, n: usize, m_max: usize) -> Circuit {
    loop {
        let first: Vec<usize> = if rng.gen_bool(0.5) { vec![0, 1] } else { vec![0, 1, 2] };
        let second: Vec<usize> = if n >= 5 { vec![3, 4] } else { vec![2, 3] };
        let groups: Vec<Vec<usize>> = if rng.gen_bool(0.5) && (n >= 5 || first.len() == 2) {
            vec![first, second]
        } else {
            vec![first]
        };
        let m = rng.gen_range(1..=m_max);
        let pairs: Vec<_> = (0..m)
            .map(|_| {
                let g = &groups[rng.gen_range(0..groups.len())];
                random_pair(rng, g)
            })
            .collect();
        let c = Circuit::from_pairs(n, &pairs).unwrap();
        if !c.fixing_pattern().is_trivial() {
            return c;
        }
    }
}

struct Tally {
    solved: usize,
    verified: usize,
}

impl Tally {
    fn record(&mut self, sol: &NncpSolution, c: &Circuit, g: &Coupling) -> bool {
        self.solved += 1;
        let ok = verify(sol, c, &g.graph).ok;
        if ok {
            self.verified += 1;
        }
        ok
    }
}

fn reduced_solution(c: &Circuit, g: &Coupling) -> Result<NncpSolution, String> {
    reduced_with_route(c, g).map(|(s, _)| s)
}

fn reduced_with_route(c: &Circuit, g: &Coupling) -> Result<(NncpSolution, ReducedMethod), String> {
    let q = quotient_graph(c, g).map_err(|e| e.to_string())?;
    let sol = solve_reduced(&q).map_err(|e| e.to_string())?;
    Ok((reconstruct(&q, &sol).map_err(|e| e.to_string())?, sol.method))
}

fn path5() -> Circuit {
    Circuit::from_pairs(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let star = quotient_graph(&path5(), &Coupling::star(6).unwrap()).unwrap();
    let cycle = quotient_graph(&path5(), &Coupling::cycle(6).unwrap()).unwrap();
    let got = (star.num_variables(), star.num_constraints(), cycle.num_variables());
    let elapsed = t.elapsed();
    report(
        1,
        "model sizes, n=6 m=5",
        got == (166, 32, 1980) && elapsed < C1_LIMIT,
        elapsed,
        format!(
            "star {}/{} (want 166/32), cycle {} vars (want 1980)",
            got.0, got.1, got.2
        ),
    )
}

/// Every permutation fixing each part setwise.
fn young(n: usize, parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    parts
        .iter()
        .map(|p| p.iter().copied().permutations(p.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|images| {
            let mut out = vec![0; n];
            for (p, img) in parts.iter().zip(&images) {
                for (&x, &y) in p.iter().zip(img) {
                    out[x] = y;
                }
            }
            out
        })
        .collect()
}

fn aut_elements(g: &Coupling) -> Vec<Vec<usize>> {
    match (g.aut.elements(), g.aut.blocks()) {
        (Some(el), _) => el.iter().map(|p| p.as_slice().to_vec()).collect(),
        (None, Some(blocks)) => young(g.n(), blocks),
        _ => unreachable!("small groups are enumerable"),
    }
}

/// Brute-force counts `(Σ|B_tau|, Σ|B_tau|·|E/B_tau|, Σ_{tau in F^k}|B_tau| per gate)`.
fn brute_counts(c: &Circuit, g: &Coupling) -> (u64, u64, Vec<u64>) {
    let n = c.n();
    let fixing = c.fixing_pattern();
    let aut = aut_elements(g);
    let edges = g.graph.edges();
    let (mut nodes, mut arcs) = (0u64, 0u64);
    let mut cross = vec![0u64; c.m()];
    for tau in (0..n).permutations(n) {
        let mut inv = vec![0; n];
        for (x, &q) in tau.iter().enumerate() {
            inv[q] = x;
        }
        let block_of: Vec<usize> = (0..n).map(|x| fixing.class_of(tau[x])).collect();
        let b_tau: Vec<&Vec<usize>> = aut
            .iter()
            .filter(|b| (0..n).all(|x| block_of[b[x]] == block_of[x]))
            .collect();
        let size = b_tau.len() as u64;
        // Burnside: Σ_b |Fix(b)| = |B|·|E/B|
        let fixed: u64 = b_tau
            .iter()
            .map(|b| {
                edges
                    .iter()
                    .filter(|&&(u, v)| {
                        let (x, y) = (b[u].min(b[v]), b[u].max(b[v]));
                        (x, y) == (u, v)
                    })
                    .count() as u64
            })
            .sum();
        nodes += size;
        arcs += fixed;
        for (k, gate) in c.gates().iter().enumerate() {
            if g.graph.has_edge(inv[gate.a()], inv[gate.b()]) {
                cross[k] += size;
            }
        }
    }
    (nodes, arcs, cross)
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for n in 4..=6usize {
        let circuits: Vec<(&str, Vec<(usize, usize)>)> = vec![
            ("connected", (1..n).map(|i| (i, i + 1)).collect()),
            ("one pair", vec![(1, 2)]),
            ("two pairs", vec![(1, 2), (3, 4), (2, 1)]),
            ("triangle", vec![(1, 2), (2, 3), (3, 1)]),
            (
                "path and pair",
                if n >= 5 {
                    vec![(1, 2), (2, 3), (4, 5)]
                } else {
                    vec![(1, 2), (2, 3)]
                },
            ),
            ("no gates", vec![]),
        ];
        for kind in KINDS {
            let g = coupling(kind, n);
            for (label, pairs) in &circuits {
                let c = Circuit::from_pairs(n, pairs).unwrap();
                let q = quotient_graph(&c, &g).unwrap();
                let order: u64 = (q.symmetry().group_order()).try_into().unwrap();
                let (nodes, arcs, cross) = brute_counts(&c, &g);
                let want_cross: Vec<u64> = cross.iter().map(|x| x / order).collect();
                let got_cross: Vec<u64> = q.cross_arcs().iter().map(|&x| x as u64).collect();
                let ok = nodes == q.nodes_per_layer() as u64 * order
                    && arcs == q.arcs_per_layer() as u64 * order
                    && cross.iter().all(|x| x % order == 0)
                    && want_cross == got_cross;
                checked += 1;
                if !ok {
                    mismatches.push(format!("{kind:?} n={n} {label}"));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    report(
        2,
        "orbit and orbital counts vs brute force",
        mismatches.is_empty() && elapsed < C2_LIMIT,
        elapsed,
        format!("{checked} cases, mismatches {mismatches:?}"),
    )
}

fn criterion_3(tally: &mut Tally, instances: &mut Vec<(Circuit, Coupling)>) -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    let (mut trivial, mut nontrivial, mut by_simplex) = (0, 0, 0);
    for i in 0..60 {
        let n = 4 + i % 3;
        let kind = KINDS[(i / 3) % 3];
        let c = if i % 2 == 0 {
            trivial += 1;
            trivial_circuit(&mut rng, n, 15)
        } else {
            nontrivial += 1;
            nontrivial_circuit(&mut rng, n, 15)
        };
        let g = coupling(kind, n);
        let oracle = solve_spp(&c, &g.graph).unwrap().opt;
        match reduced_with_route(&c, &g) {
            Ok((sol, route)) => {
                by_simplex += usize::from(route == ReducedMethod::Simplex);
                let verified = tally.record(&sol, &c, &g);
                if sol.opt != oracle || !verified {
                    bad.push(format!("#{i} {kind:?} n={n}: reduced {} vs {oracle}", sol.opt));
                }
            }
            Err(e) => bad.push(format!("#{i} {kind:?} n={n}: {e}")),
        }
        instances.push((c, g));
    }
    let elapsed = t.elapsed();
    report(
        3,
        "reduced optimum equals layered-graph Dijkstra",
        bad.is_empty() && elapsed < C3_LIMIT,
        elapsed,
        format!("60 instances ({trivial} trivial, {nontrivial} nontrivial fixing, {by_simplex} via simplex), mismatches {bad:?}"),
    )
}

fn criterion_4(tally: &mut Tally, instances: &mut Vec<(Circuit, Coupling)>) -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut bad = Vec::new();
    for i in 0..30 {
        let n = rng.gen_range(3..=20);
        let c = trivial_circuit(&mut rng, n, 2 * n + 5);
        let g = Coupling::star(n).unwrap();
        let (dp_opt, centers) = solve_star_dp(&c).unwrap();
        let dp_sol = centers_to_solution(n, &centers);
        let dp_ok = tally.record(&dp_sol, &c, &g);
        match reduced_solution(&c, &g) {
            Ok(sol) => {
                let ok = tally.record(&sol, &c, &g);
                if sol.opt != dp_opt || !ok || !dp_ok || dp_sol.opt != dp_opt {
                    bad.push(format!("#{i} n={n}: dp {dp_opt} vs reduced {}", sol.opt));
                }
            }
            Err(e) => bad.push(format!("#{i} n={n}: {e}")),
        }
        instances.push((c, g));
    }
    let elapsed = t.elapsed();
    report(
        4,
        "star dynamic program equals reduced solve",
        bad.is_empty() && elapsed < C4_LIMIT,
        elapsed,
        format!("30 instances, n <= 20, mismatches {bad:?}"),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    type Case = (Coupling, usize, Vec<(usize, usize)>);
    let cases: Vec<Case> = vec![
        (Coupling::star(4).unwrap(), 4, vec![(1, 2), (3, 4), (1, 3)]),
        (Coupling::star(4).unwrap(), 4, vec![(1, 2), (3, 4)]),
        (Coupling::cycle(4).unwrap(), 4, vec![(1, 3), (2, 4), (1, 2)]),
        (Coupling::star(5).unwrap(), 5, vec![(1, 2), (2, 3), (4, 5), (1, 3)]),
        (Coupling::cycle(5).unwrap(), 5, vec![(1, 3), (2, 4), (1, 2)]),
        (
            Coupling::biclique(2, 3).unwrap(),
            5,
            vec![(1, 2), (3, 4), (1, 2), (3, 5)],
        ),
    ];
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (i, (g, n, pairs)) in cases.iter().enumerate() {
        let c = Circuit::from_pairs(*n, pairs).unwrap();
        let sol = solve_spp(&c, &g.graph).unwrap();
        let flow = SppFlow::indicator(&sol, &g.graph).unwrap();
        let r = reynolds_check(&c, g, &flow).unwrap();
        worst = worst
            .max(r.max_residual)
            .max(r.max_bound_violation)
            .max((r.objective_after - r.objective_before).abs());
        if !r.ok(REYNOLDS_TOL) || r.objective_before != sol.opt as f64 {
            bad.push(format!("case {i}: {r:?}"));
        }
    }
    let elapsed = t.elapsed();
    report(
        5,
        "group average of an optimal path is feasible and optimal",
        bad.is_empty(),
        elapsed,
        format!(
            "{} cases at n=4,5, worst deviation {worst:.1e}, failures {bad:?}",
            cases.len()
        ),
    )
}

/// Instances below the threshold, as `(family, n, which)`.
fn criterion_6(instances: &[(Circuit, Coupling)]) -> (Outcome, Vec<(Family, usize, &'static str)>) {
    let t = Instant::now();
    let mut below = Vec::new();
    let mut checked = 0;
    let mut lowest_constraints = f64::INFINITY;
    for (c, g) in instances.iter().filter(|(c, _)| c.n() >= 5) {
        let s = ReductionStats::of(&quotient_graph(c, g).unwrap());
        checked += 1;
        lowest_constraints = lowest_constraints.min(s.constraint_reduction_pct);
        if !s.variable_reduction_at_least(REDUCTION_PCT) {
            below.push((g.family(), c.n(), "variables"));
        }
        if !s.constraint_reduction_at_least(REDUCTION_PCT) {
            below.push((g.family(), c.n(), "constraints"));
        }
    }
    let elapsed = t.elapsed();
    let summary: Vec<String> = below
        .iter()
        .map(|&(f, n, what)| (f.to_string(), n, what))
        .counts()
        .into_iter()
        .sorted()
        .map(|((f, n, what), k)| format!("{k}x {what} on {f} n={n}"))
        .collect();
    let outcome = report(
        6,
        "reduction of at least 90% for n >= 5",
        below.is_empty(),
        elapsed,
        format!(
            "{checked} instances, lowest constraint reduction {lowest_constraints:.2}%, below threshold: {summary:?}"
        ),
    );
    (outcome, below)
}

fn criterion_7(tally: &mut Tally, instances: &mut Vec<(Circuit, Coupling)>) -> Outcome {
    let t = Instant::now();
    let raw = random_circuit(InstanceClass::I, 100, 400, SEED).unwrap();
    let c = nncp_core::circuit::decompose(&raw).unwrap();
    let g = Coupling::star(100).unwrap();
    let result = reduced_solution(&c, &g);
    let elapsed = t.elapsed();
    let (pass, detail) = match &result {
        Ok(sol) => {
            let ok = tally.record(sol, &c, &g);
            (
                ok && elapsed < C7_LIMIT,
                format!("opt {}, verification {}", sol.opt, ok),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    instances.push((c, g));
    report(7, "class I star n=100 m=400 end to end", pass, elapsed, detail)
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for i in 0..20 {
        let n = 4 + i % 3;
        let kind = KINDS[i % 3];
        let c = if i % 2 == 0 {
            trivial_circuit(&mut rng, n, 8)
        } else {
            nontrivial_circuit(&mut rng, n, 8)
        };
        let q = quotient_graph(&c, &coupling(kind, n)).unwrap();
        let a = simplex_solve(&build_rspp_scaled(&q));
        let b = simplex_solve(&build_gnfp(&q).to_lp());
        let gap = (a.objective - b.objective).abs();
        worst = worst.max(gap);
        if a.status != LpStatus::Optimal || b.status != LpStatus::Optimal || gap > GNFP_TOL {
            bad.push(format!(
                "#{i} {kind:?} n={n}: {:?} {} vs {:?} {}",
                a.status, a.objective, b.status, b.objective
            ));
        }
    }
    let elapsed = t.elapsed();
    report(
        8,
        "generalized flow optimum equals reduced LP optimum",
        bad.is_empty(),
        elapsed,
        format!("20 instances, largest gap {worst:.1e}, failures {bad:?}"),
    )
}

/// Graycode-style fixtures, run only when the original files are present.
fn revlib_fixtures() {
    let dir = std::env::var("NNCP_REVLIB_DIR").unwrap_or_else(|_| "tests/fixtures".into());
    let path = std::path::Path::new(&dir).join("graycode6_47.real");
    let Ok(text) = std::fs::read_to_string(&path) else {
        println!("fixture graycode6_47 [SKIP] {} not present", path.display());
        return;
    };
    let c = nncp_core::circuit::decompose(&nncp_core::circuit::parse_real(&text).unwrap()).unwrap();
    for (desc, want) in [("star", 2), ("cycle", 0), ("biclique:1", 1)] {
        let g = Coupling::from_descriptor(desc, c.n(), Default::default()).unwrap();
        let got = reduced_solution(&c, &g).map(|s| s.opt);
        println!(
            "fixture graycode6_47 {desc} [{}] opt {got:?}, table value {want}",
            if got == Ok(want) { "PASS" } else { "FAIL" }
        );
    }
}

fn main() {
    let mut tally = Tally { solved: 0, verified: 0 };
    let mut instances = Vec::new();
    let mut outcomes = vec![criterion_1(), criterion_2()];
    outcomes.push(criterion_3(&mut tally, &mut instances));
    outcomes.push(criterion_4(&mut tally, &mut instances));
    outcomes.push(criterion_5());
    let c7 = criterion_7(&mut tally, &mut instances);
    let (c6, below) = criterion_6(&instances);
    outcomes.push(c6);
    outcomes.push(c7);
    outcomes.push(criterion_8());
    outcomes.push(report(
        9,
        "every reconstructed schedule verifies",
        tally.solved > 0 && tally.verified == tally.solved,
        Duration::ZERO,
        format!("{}/{} from criteria 3, 4 and 7", tally.verified, tally.solved),
    ));
    revlib_fixtures();

    // Cycle C_5 has |Aut| = 10, so with no qubit symmetry each layer keeps
    // 120/10 = 12 orbits: 12m + 2 of 120m + 2 rows stays above 10% for every m.
    let known_cause = below
        .iter()
        .all(|&(f, n, what)| f == Family::Cycle && n == 5 && what == "constraints");
    let mut unexpected = Vec::new();
    for o in &outcomes {
        if o.pass {
            continue;
        }
        if KNOWN_FAIL.contains(&o.id) && o.id == 6 && known_cause && !below.is_empty() {
            println!("criterion 6 fails only on cycle n=5 row counts, which cannot reach 90% (12m+2 of 120m+2)");
            continue;
        }
        unexpected.push(format!("criterion {}: {}", o.id, o.detail));
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures:\n{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
