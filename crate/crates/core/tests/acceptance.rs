//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use colorcomm_core::edge::{
    defer_edges, delta_perfect_matching, edge_coloring_protocol, fournier_color, two_delta_protocol, LocalDecomposition,
};
use colorcomm_core::harness::{run_one, ExperimentConfig, Problem, Summary, PROTOCOL_STREAM};
use colorcomm_core::slackint::{color_sample_uniform, rand_slack_int, SlackIntInstance};
use colorcomm_core::vertex::{random_color_trial, vertex_coloring_protocol, VertexConfig};
use colorcomm_core::zec::{
    conditional_win, find_failure_witness, product_game_estimate, zec_win_probability, ZecStrategy, INPUTS, OUTCOMES,
    WIN_BOUND,
};
use colorcomm_core::{
    gen_random_instance, verify_edge_coloring, verify_vertex_coloring, EdgePartition, Model, PartitionStrategy, Party,
    RuntimeConfig,
};

type Outcome = Result<String, String>;
type Visit<'a> = dyn FnMut(usize, &[(u32, u32)]) + 'a;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

fn correctness_instances() -> Vec<(usize, usize, Model, PartitionStrategy, u64)> {
    const DELTAS: [usize; 12] = [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64];
    (0..2000u64)
        .map(|i| {
            let k = i as usize;
            let n = 8usize << (k % 10);
            let model = Model::ALL[k % Model::ALL.len()];
            let partition = PartitionStrategy::ALL[(k / 3) % PartitionStrategy::ALL.len()];
            let mut delta = DELTAS[(k / 7) % DELTAS.len()].min(n - 1);
            if model == Model::GadgetUnion {
                delta = delta.max(2);
            }
            (n, delta, model, partition, i)
        })
        .collect()
}

fn correctness() -> Outcome {
    let cases = correctness_instances();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|&(n, delta, model, part, seed)| {
            let tag = format!("n={n} Δ={delta} {} {} seed={seed}", model.name(), part.name());
            let p = match gen_random_instance(n, delta, model, part, seed) {
                Ok(p) => p,
                Err(e) => return Some(format!("{tag}: generation: {e}")),
            };
            let d = p.max_degree();
            match vertex_coloring_protocol(&p, seed ^ PROTOCOL_STREAM, &VertexConfig::default()) {
                Ok(run) => {
                    let v = verify_vertex_coloring(p.graph(), &run.coloring, d + 1);
                    if !v.is_empty() {
                        return Some(format!("{tag}: vertex {:?}", v[0]));
                    }
                }
                Err(e) => return Some(format!("{tag}: vertex protocol: {e}")),
            }
            match edge_coloring_protocol(&p, &RuntimeConfig::default()) {
                Ok(run) => {
                    let v = verify_edge_coloring(&p, &run.coloring, (2 * d).saturating_sub(1));
                    if !v.is_empty() {
                        return Some(format!("{tag}: edge {:?}", v[0]));
                    }
                }
                Err(e) => return Some(format!("{tag}: edge protocol: {e}")),
            }
            None
        })
        .collect();
    ensure(failures.is_empty(), || {
        format!("{} failing instances, first: {}", failures.len(), failures[0])
    })?;
    Ok(format!("{} instances, vertex and edge outputs all proper", cases.len()))
}

// ---------------------------------------------------------------- 2

fn color_sample() -> Outcome {
    let mut checked = 0usize;
    for m in 1..=6usize {
        for xs in 0u32..(1 << m) {
            for ys in 0u32..(1 << m) {
                let set = |mask: u32| (0..m as u32).filter(|&e| mask >> e & 1 == 1).collect::<Vec<_>>();
                let inst = SlackIntInstance::new(m, set(xs), set(ys));
                if inst.slack() < 1 {
                    continue;
                }
                let free = inst.complement();
                for seed in 0..3 {
                    let (c, _) = color_sample_uniform(&inst, seed).map_err(|e| format!("{inst:?}: {e}"))?;
                    ensure(free.contains(&c), || format!("{inst:?} seed {seed}: {c} not free"))?;
                    checked += 1;
                }
            }
        }
    }
    let fixed = [
        SlackIntInstance::new(8, vec![0, 1, 2], vec![2, 3]),
        SlackIntInstance::new(20, (0..8).collect(), (5..14).collect()),
        SlackIntInstance::new(64, (0..60).step_by(2).collect(), (1..40).step_by(2).collect()),
    ];
    let draws = 50_000u64;
    let mut worst = 1.0f64;
    for (i, inst) in fixed.iter().enumerate() {
        let free = inst.complement();
        let results: Vec<u32> = (0..draws)
            .into_par_iter()
            .map(|s| color_sample_uniform(inst, 1_000_000 * (i as u64 + 1) + s).map(|r| r.0))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let mut counts = vec![0u64; free.len()];
        for c in results {
            let k = free
                .iter()
                .position(|&f| f == c)
                .ok_or_else(|| format!("instance {i}: {c} not free"))?;
            counts[k] += 1;
        }
        let expected = draws as f64 / free.len() as f64;
        let stat: f64 = counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        let p = 1.0 - ChiSquared::new((free.len() - 1) as f64).unwrap().cdf(stat);
        worst = worst.min(p);
        ensure(p >= 0.001, || format!("instance {i}: chi-square p = {p:.2e}"))?;
    }
    Ok(format!(
        "{checked} exhaustive runs in complement; min chi-square p = {worst:.3}"
    ))
}

// ---------------------------------------------------------------- 3

fn slack_int_scaling() -> Outcome {
    let mut means = Vec::new();
    for t in 6..=14u32 {
        let m = 1usize << t;
        let bound = 40.0 * ((m + 1) as f64).log2().powi(2);
        let bits: Vec<u64> = (0..500u64)
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64((t as u64) << 32 | trial);
                let mut perm: Vec<u32> = (0..m as u32).collect();
                perm.shuffle(&mut rng);
                let x = perm[..m / 4].to_vec();
                let y = perm[m / 4..m / 2].to_vec();
                let inst = SlackIntInstance::new(m, x, y);
                let (e, tr) = rand_slack_int(&inst, rng.random()).map_err(|e| e.to_string())?;
                ensure(inst.complement().contains(&e), || format!("m={m}: {e} not free"))?;
                Ok(tr.total_bits)
            })
            .collect::<Result<_, String>>()?;
        let worst = *bits.iter().max().unwrap();
        ensure(worst as f64 <= bound, || format!("m={m}: {worst} bits > {bound:.0}"))?;
        means.push(bits.iter().sum::<u64>() as f64 / bits.len() as f64);
    }
    let (lo, hi) = means.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    ensure(hi <= 2.0 * lo, || format!("mean bits range {lo:.1}..{hi:.1}"))?;
    Ok(format!(
        "mean bits {lo:.1}..{hi:.1} (ratio {:.2}); worst case within bound",
        hi / lo
    ))
}

// ---------------------------------------------------------------- 4

fn trial_decay() -> Outcome {
    let (n, delta, seeds) = (2048usize, 16usize, 200u64);
    let runs: Vec<(Vec<usize>, usize)> = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let p = gen_random_instance(n, delta, Model::NearRegular, PartitionStrategy::Random, seed)
                .map_err(|e| e.to_string())?;
            let (state, _) =
                random_color_trial(&p, seed ^ PROTOCOL_STREAM, &VertexConfig::default()).map_err(|e| e.to_string())?;
            let left = state.active_vertices().len();
            Ok((state.active_after, left))
        })
        .collect::<Result<_, String>>()?;
    for i in 1..=30usize {
        let frac: Vec<f64> = runs
            .iter()
            .map(|(a, _)| a.get(i - 1).copied().unwrap_or(0) as f64 / n as f64)
            .collect();
        let s = Summary::of(&frac);
        let bound = (23.0f64 / 24.0).powi(i as i32 - 1) + 3.0 * s.sem(frac.len());
        ensure(s.mean <= bound, || {
            format!("iteration {i}: active {:.4} > {bound:.4}", s.mean)
        })?;
    }
    let left: Vec<f64> = runs.iter().map(|r| r.1 as f64).collect();
    let s = Summary::of(&left);
    let target = (n as f64 / (n as f64).log2().powi(4)).max(1.0) + 3.0 * s.sem(left.len());
    ensure(s.mean <= target, || {
        format!("mean leftover {:.3} > {target:.3}", s.mean)
    })?;
    let after1 = runs.iter().map(|r| r.0[0] as f64).sum::<f64>() / (seeds as f64 * n as f64);
    Ok(format!(
        "active after iteration 1: {after1:.3}; mean leftover {:.3}",
        s.mean
    ))
}

// ---------------------------------------------------------------- 5

fn vertex_linear_bits() -> Outcome {
    let cfg = |n: usize| ExperimentConfig {
        model: Model::NearRegular,
        ..ExperimentConfig::new(Problem::Vertex, vec![n], vec![16], 50)
    };
    let mut means = Vec::new();
    let mut worst_slack = f64::MAX;
    for n in [1usize << 10, 1 << 13] {
        let c = cfg(n);
        let reports = colorcomm_core::cmd_run(&c).map_err(|e| e.to_string())?;
        for r in &reports {
            ensure(r.verified, || format!("n={n} seed={} not verified", r.seed))?;
            let lg = (n as f64).log2();
            let cap = 50.0 * lg.log2() * (((r.max_degree + 1) as f64).log2() + 1.0);
            ensure(r.total_rounds as f64 <= cap, || {
                format!("n={n} seed={}: {} rounds > {cap:.0}", r.seed, r.total_rounds)
            })?;
            worst_slack = worst_slack.min(cap - r.total_rounds as f64);
        }
        means.push(reports.iter().map(|r| r.bits_per_n).sum::<f64>() / reports.len() as f64);
    }
    ensure(means[1] <= 1.5 * means[0], || {
        format!("bits/n {:.2} at 2^13 vs {:.2} at 2^10", means[1], means[0])
    })?;
    Ok(format!(
        "bits/n {:.2} at 2^10, {:.2} at 2^13 (ratio {:.3}); round headroom ≥ {worst_slack:.0}",
        means[0],
        means[1],
        means[1] / means[0]
    ))
}

// ---------------------------------------------------------------- 6

fn edge_sweep() -> Vec<(EdgePartition, u64)> {
    let mut out = Vec::new();
    for (i, &(n, delta)) in [
        (256usize, 8usize),
        (512, 8),
        (1024, 8),
        (2048, 8),
        (4096, 8),
        (1024, 16),
        (1024, 32),
        (2048, 64),
    ]
    .iter()
    .enumerate()
    {
        for s in 0..12u64 {
            let model = Model::ALL[s as usize % 3];
            let part = PartitionStrategy::ALL[(s as usize / 3) % 4];
            let seed = (i as u64) << 16 | s;
            let p = gen_random_instance(n, delta, model, part, seed).expect("feasible");
            if p.max_degree() >= 8 {
                out.push((p, seed));
            }
        }
    }
    for (k, delta) in [8usize, 8, 8, 12, 16, 24, 32, 64].into_iter().enumerate() {
        for s in 0..4u64 {
            let seed = 1 << 24 | (k as u64) << 8 | s;
            out.push((common::hub_heavy_instance(6 + k, 6 * delta, delta, seed), seed));
        }
    }
    out
}

fn edge_constant_rounds() -> Outcome {
    let sweep = edge_sweep();
    let (mut max_ratio, mut max_rounds) = (0.0f64, 0u64);
    for (p, seed) in &sweep {
        let run = edge_coloring_protocol(p, &RuntimeConfig::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        let n = p.n() as f64;
        let t = &run.transcript;
        ensure(t.total_bits as f64 <= 30.0 * n, || {
            format!("seed {seed}: {} bits > 30n", t.total_bits)
        })?;
        ensure(t.total_rounds <= 6, || {
            format!("seed {seed}: {} rounds", t.total_rounds)
        })?;
        let v = verify_edge_coloring(p, &run.coloring, 2 * p.max_degree() - 1);
        ensure(v.is_empty(), || format!("seed {seed}: {:?}", v[0]))?;
        max_ratio = max_ratio.max(t.total_bits as f64 / n);
        max_rounds = max_rounds.max(t.total_rounds);

        let (c, t2) = two_delta_protocol(p).map_err(|e| e.to_string())?;
        ensure(t2.total_bits == 0 && t2.total_rounds == 0, || {
            format!("seed {seed}: 2Δ transcript {t2:?}")
        })?;
        let v = verify_edge_coloring(p, &c, 2 * p.max_degree());
        ensure(v.is_empty(), || format!("seed {seed}: 2Δ {:?}", v[0]))?;
    }
    Ok(format!(
        "{} runs with Δ ≥ 8: max bits/n {max_ratio:.2}, max rounds {max_rounds}; 2Δ path silent and proper",
        sweep.len()
    ))
}

// ---------------------------------------------------------------- 7

fn degrees(n: usize, edges: &[(u32, u32)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, v) in edges {
        d[u as usize] += 1;
        d[v as usize] += 1;
    }
    d
}

fn structural_invariants() -> Outcome {
    let sweep = edge_sweep();
    let (mut checks, mut targets, mut matched) = (0usize, 0usize, 0usize);
    for (p, seed) in &sweep {
        let (n, delta) = (p.n(), p.max_degree());
        for party in [Party::Alice, Party::Bob] {
            let own = p.edges_of(party);
            let (dg, rg) = defer_edges(n, &own, delta);
            ensure(degrees(n, &dg).into_iter().all(|d| d <= 2), || {
                format!("seed {seed}: DG degree > 2")
            })?;
            let rg_deg = degrees(n, &rg);
            let matching = delta_perfect_matching(n, &rg, delta).map_err(|e| format!("seed {seed}: {e}"))?;
            let mut covered = vec![false; n];
            for &(h, w) in &matching {
                ensure(!covered[h as usize] && !covered[w as usize], || {
                    format!("seed {seed}: not a matching")
                })?;
                covered[h as usize] = true;
                covered[w as usize] = true;
            }
            ensure((0..n).all(|v| rg_deg[v] < delta || covered[v]), || {
                format!("seed {seed}: degree-Δ vertex uncovered")
            })?;
            let norm = |&(u, v): &(u32, u32)| (u.min(v), u.max(v));
            let m_set: std::collections::HashSet<(u32, u32)> = matching.iter().map(norm).collect();
            let rg_prime: Vec<(u32, u32)> = rg.iter().copied().filter(|e| !m_set.contains(&norm(e))).collect();
            let rest = degrees(n, &rg_prime);
            ensure(rest.iter().all(|&d| d < delta), || {
                format!("seed {seed}: RG' degree ≥ Δ")
            })?;
            ensure(
                rg_prime
                    .iter()
                    .all(|&(u, v)| rest[u as usize] + 1 < delta || rest[v as usize] + 1 < delta),
                || format!("seed {seed}: max-degree vertices of RG' adjacent"),
            )?;
            LocalDecomposition { dg, matching, rg_prime }
                .check(n, delta, &own)
                .map_err(|e| format!("seed {seed}: {e}"))?;
            checks += 1;
        }
        let run = edge_coloring_protocol(p, &RuntimeConfig::default()).map_err(|e| e.to_string())?;
        for s in run.stats.iter().flatten() {
            targets += s.cover_targets;
            matched += s.matching_edges;
            ensure(s.dg_max_degree <= 2, || {
                format!("seed {seed}: reported DG degree {}", s.dg_max_degree)
            })?;
            ensure(s.cover_bitmap_bits <= 3 * s.cover_targets, || {
                format!("seed {seed}: bitmap {} > 3·{}", s.cover_bitmap_bits, s.cover_targets)
            })?;
        }
    }
    Ok(format!(
        "{checks} party decompositions and {} protocol runs checked; {matched} matching edges, {targets} cover targets",
        sweep.len()
    ))
}

// ---------------------------------------------------------------- 8

/// Every edge list with at most `max_edges` edges, sorted, whose vertices
/// first appear in the order 0, 1, 2, ... Covers all graphs up to relabeling.
fn enumerate_graphs(max_edges: usize, mut visit: impl FnMut(usize, &[(u32, u32)])) {
    fn rec(edges: &mut Vec<(u32, u32)>, used: u32, max: usize, visit: &mut Visit<'_>) {
        visit(used as usize, edges);
        if edges.len() == max {
            return;
        }
        let last = edges.last().copied();
        let mut candidates: Vec<(u32, u32)> = Vec::new();
        for u in 0..used {
            for v in u + 1..=used {
                candidates.push((u, v));
            }
        }
        candidates.push((used, used + 1));
        for e in candidates {
            if last.is_some_and(|l| e <= l) {
                continue;
            }
            edges.push(e);
            rec(edges, used.max(e.1 + 1), max, visit);
            edges.pop();
        }
    }
    rec(&mut Vec::new(), 0, max_edges, &mut visit);
}

fn colorable(n: usize, edges: &[(u32, u32)], d: usize) -> bool {
    fn go(i: usize, edges: &[(u32, u32)], d: usize, used: &mut [u64]) -> bool {
        let Some(&(u, v)) = edges.get(i) else { return true };
        for c in 0..d {
            let bit = 1u64 << c;
            if used[u as usize] & bit == 0 && used[v as usize] & bit == 0 {
                used[u as usize] |= bit;
                used[v as usize] |= bit;
                if go(i + 1, edges, d, used) {
                    return true;
                }
                used[u as usize] &= !bit;
                used[v as usize] &= !bit;
            }
        }
        false
    }
    go(0, edges, d, &mut vec![0; n])
}

fn fournier_oracle() -> Outcome {
    let (mut graphs, mut runs) = (0usize, 0usize);
    let mut failure: Option<String> = None;
    enumerate_graphs(7, |n, edges| {
        if failure.is_some() || edges.is_empty() {
            return;
        }
        graphs += 1;
        let deg = degrees(n, edges);
        let max = *deg.iter().max().unwrap();
        for d in [max, max + 1] {
            let independent = edges.iter().all(|&(u, v)| deg[u as usize] < d || deg[v as usize] < d);
            if !independent {
                continue;
            }
            runs += 1;
            let colors = match fournier_color(n, edges, d) {
                Ok(c) => c,
                Err(e) => {
                    failure = Some(format!("{edges:?} d={d}: {e}"));
                    return;
                }
            };
            let mut seen = std::collections::HashSet::new();
            let proper = colors.len() == edges.len()
                && colors.iter().all(|&c| (c as usize) < d)
                && edges
                    .iter()
                    .zip(&colors)
                    .all(|(&(u, v), &c)| seen.insert((u, c)) && seen.insert((v, c)));
            if !proper {
                failure = Some(format!("{edges:?} d={d}: improper {colors:?}"));
                return;
            }
            if !colorable(n, edges, d) {
                failure = Some(format!("{edges:?} d={d}: oracle finds no coloring"));
                return;
            }
        }
    });
    if let Some(f) = failure {
        return Err(f);
    }
    ensure(graphs == 5075, || format!("enumerated {graphs} graphs, expected 5075"))?;
    Ok(format!(
        "{graphs} graphs, {runs} runs with d in {{Δ, Δ+1}}, all proper and confirmed"
    ))
}

// ---------------------------------------------------------------- 9

fn random_deterministic(rng: &mut ChaCha8Rng) -> ZecStrategy {
    let picks: Vec<(usize, usize)> = (0..INPUTS)
        .map(|_| (rng.random_range(0..3), rng.random_range(0..3)))
        .collect();
    ZecStrategy::deterministic(|i| picks[i])
}

fn sparse(rng: &mut ChaCha8Rng) -> ZecStrategy {
    let rows = (0..INPUTS)
        .map(|_| {
            let mut row = [0.0; OUTCOMES];
            let a = rng.random_range(0..OUTCOMES);
            let b = rng.random_range(0..OUTCOMES);
            let w: f64 = rng.random();
            row[a] += w;
            row[b] += 1.0 - w;
            row
        })
        .collect();
    ZecStrategy::new(rows).expect("normalized")
}

/// Each shared vertex gets one color, used on every input that contains it.
fn per_vertex(rng: &mut ChaCha8Rng) -> ZecStrategy {
    let color: Vec<usize> = (0..7).map(|_| rng.random_range(0..3)).collect();
    let inputs = colorcomm_core::zec::zec_inputs();
    ZecStrategy::deterministic(|i| (color[inputs[i].0 as usize], color[inputs[i].1 as usize]))
}

fn strategy(kind: usize, rng: &mut ChaCha8Rng) -> ZecStrategy {
    match kind % 4 {
        0 => ZecStrategy::random_dirichlet(rng),
        1 => random_deterministic(rng),
        2 => sparse(rng),
        _ => per_vertex(rng),
    }
}

fn witness_loss(a: &ZecStrategy, b: &ZecStrategy, ia: Option<usize>, ib: Option<usize>) -> f64 {
    let all: Vec<usize> = (0..INPUTS).collect();
    let xs = ia.map_or(all.clone(), |i| vec![i]);
    let ys = ib.map_or(all, |i| vec![i]);
    let mut loss = 0.0;
    for &x in &xs {
        for &y in &ys {
            loss += 1.0 - conditional_win(a, b, x, y);
        }
    }
    loss / (INPUTS * INPUTS) as f64
}

fn zec_game() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2ec);
    let mut worst_z = 0.0f64;
    for k in 0..20 {
        let a = strategy(k, &mut rng);
        let b = strategy(k + 1, &mut rng);
        let exact = zec_win_probability(&a, &b);
        let trials = 100_000u64;
        let est = product_game_estimate(&a, &b, 1, trials, &mut rng);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt().max(1e-12);
        let z = (est.estimate - exact).abs() / sigma;
        worst_z = worst_z.max(if exact * (1.0 - exact) == 0.0 { 0.0 } else { z });
        ensure((est.estimate - exact).abs() <= 4.0 * sigma, || {
            format!("pair {k}: estimate {} vs exact {exact}", est.estimate)
        })?;
    }
    let mut best = 0.0f64;
    let mut cases = [0usize; 2];
    for k in 0..1000 {
        let a = strategy(k, &mut rng);
        let b = strategy(k / 3, &mut rng);
        let p = zec_win_probability(&a, &b);
        best = best.max(p);
        ensure(p <= WIN_BOUND, || format!("pair {k}: win {p}"))?;
        let w = find_failure_witness(&a, &b).map_err(|e| format!("pair {k}: {e}"))?;
        let loss = witness_loss(&a, &b, w.alice_input, w.bob_input);
        ensure(loss + 1e-15 >= w.bound && loss + 1e-15 >= w.failure_probability, || {
            format!("pair {k}: witness loss {loss} below bound {}", w.bound)
        })?;
        ensure(1.0 - p + 1e-15 >= w.bound, || {
            format!("pair {k}: loss {} < {}", 1.0 - p, w.bound)
        })?;
        cases[w.case as usize - 1] += 1;
    }
    Ok(format!(
        "MC within 4σ (worst {worst_z:.2}σ); best win {best:.4}; witnesses case1={} case2={}",
        cases[0], cases[1]
    ))
}

// ---------------------------------------------------------------- 10

fn determinism() -> Outcome {
    let configs = [
        ExperimentConfig::new(Problem::Vertex, vec![256], vec![8], 1),
        ExperimentConfig {
            model: Model::GadgetUnion,
            partition: PartitionStrategy::DegreeSplit,
            ..ExperimentConfig::new(Problem::Vertex, vec![512], vec![16], 1)
        },
        ExperimentConfig::new(Problem::Edge, vec![512], vec![12], 1),
        ExperimentConfig {
            model: Model::NearRegular,
            partition: PartitionStrategy::Interleaved,
            ..ExperimentConfig::new(Problem::Edge, vec![128], vec![5], 1)
        },
        ExperimentConfig::new(Problem::Zec, vec![90], vec![], 1),
    ];
    let mut replays = 0usize;
    for i in 0..50u64 {
        let cfg = &configs[i as usize % configs.len()];
        let pt = cfg.points()[0];
        let seed = 7919 * i;
        let first = run_one(cfg, pt, seed).map_err(|e| e.to_string())?;
        let second = run_one(cfg, pt, seed).map_err(|e| e.to_string())?;
        let same = first.transcript == second.transcript
            && first.output == second.output
            && serde_json::to_string(&first.transcript).unwrap() == serde_json::to_string(&second.transcript).unwrap();
        ensure(same, || format!("{} seed {seed} diverged", cfg.problem))?;
        let strip = |mut r: colorcomm_core::RunReport| {
            r.wall_ms = 0.0;
            r
        };
        ensure(strip(first.report) == strip(second.report), || {
            format!("seed {seed}: reports differ")
        })?;
        replays += 1;
    }
    Ok(format!("{replays} replays bit-identical"))
}

type Criterion = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("correctness suite", correctness),
        ("color sample correctness and uniformity", color_sample),
        ("slack-int scaling", slack_int_scaling),
        ("color trial decay", trial_decay),
        ("vertex protocol bits and rounds", vertex_linear_bits),
        ("edge protocol bits and rounds", edge_constant_rounds),
        ("structural invariants", structural_invariants),
        ("fournier oracle", fournier_oracle),
        ("zec game", zec_game),
        ("determinism", determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} [{name}] {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2} [{name}] {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
