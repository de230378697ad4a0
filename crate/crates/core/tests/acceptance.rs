//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use switchmix::bounds;
use switchmix::chain::{DirectedChain, SwitchChain, UndirectedChain, Variant};
use switchmix::construct::{realize, realize_directed};
use switchmix::encoding::{self, choice_count_and_bound, generate, repair, Anchors, Encoding, Mode, Plan};
use switchmix::enumerate::{self, DEFAULT_CAP};
use switchmix::irreducibility::{self, find_useful, induced_three_cycles};
use switchmix::{DegreeSequence, Digraph, DirectedDegreeSequence, Graph};

type Edges = Vec<(usize, usize)>;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn seq(d: &[u32]) -> DegreeSequence {
    DegreeSequence::new(d.to_vec()).unwrap()
}

/// Every simple graph on `n <= 7` vertices with the given degrees, by
/// scanning all edge subsets.
fn brute_graphs(degrees: &[u32]) -> Vec<Edges> {
    let n = degrees.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut deg = vec![0u32; n];
        let mut edges = Vec::new();
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
            }
        }
        if deg == degrees {
            out.push(edges);
        }
    }
    out
}

fn disjoint(e: (usize, usize), f: (usize, usize)) -> bool {
    e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1
}

/// Exact switch-chain transition matrix over `states`, computed from the
/// chain's definition: pick a uniform pair of disjoint edges, then one of
/// three outcomes (hold, or one of the two rematchings) uniformly.
fn oracle_matrix(states: &[Edges]) -> Vec<Vec<BigRational>> {
    let index: HashMap<Edges, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut p = vec![vec![BigRational::zero(); states.len()]; states.len()];
    for (i, s) in states.iter().enumerate() {
        let set: HashSet<(usize, usize)> = s.iter().copied().collect();
        let mut pairs = Vec::new();
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if disjoint(s[a], s[b]) {
                    pairs.push((s[a], s[b]));
                }
            }
        }
        let w = rat(1, 3 * pairs.len() as i64);
        p[i][i] += rat(1, 3);
        let norm = |u: usize, v: usize| (u.min(v), u.max(v));
        for ((x, y), (z, t)) in pairs {
            for new in [[norm(x, z), norm(y, t)], [norm(x, t), norm(y, z)]] {
                if set.contains(&new[0]) || set.contains(&new[1]) {
                    p[i][i] += &w;
                    continue;
                }
                let mut next: Edges = s.iter().copied().filter(|&e| e != norm(x, y) && e != norm(z, t)).collect();
                next.extend(new);
                next.sort_unstable();
                p[i][index[&next]] += &w;
            }
        }
    }
    p
}

fn tv_uniform(v: &[BigRational]) -> BigRational {
    let u = rat(1, v.len() as i64);
    v.iter().map(|x| if x > &u { x - &u } else { &u - x }).fold(BigRational::zero(), |a, b| a + b) / rat(2, 1)
}

fn step(v: &[BigRational], p: &[Vec<BigRational>]) -> Vec<BigRational> {
    (0..v.len())
        .map(|j| (0..v.len()).fold(BigRational::zero(), |acc, i| acc + &v[i] * &p[i][j]))
        .collect()
}

/// Independent recount of the encoding identities from the raw entries.
fn identities_hold(l: &Encoding) -> bool {
    let n = l.n();
    let directed = l.mode() == Mode::Directed;
    let (mut p, mut q, mut ones) = (0i64, 0i64, 0i64);
    let mut total = 0i64;
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            match l.get(u, v) {
                2 => p += 1,
                -1 => q += 1,
                1 => ones += 1,
                _ => {}
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            total += l.get(u, v) as i64;
        }
    }
    let size = if directed { total } else { total / 2 };
    if ones != size - 2 * p + q {
        return false;
    }
    (0..n).all(|v| {
        let row: Vec<i8> = (0..n).filter(|&w| w != v).map(|w| l.get(v, w)).collect();
        let col: Vec<i8> = (0..n).filter(|&w| w != v).map(|w| l.get(w, v)).collect();
        let check = |xs: &[i8]| {
            let d: i64 = xs.iter().map(|&x| x as i64).sum();
            let zeta = xs.iter().filter(|&&x| x == 2).count() as i64;
            let eta = xs.iter().filter(|&&x| x == -1).count() as i64;
            let good = xs.iter().filter(|&&x| x == 1).count() as i64;
            let all = xs.iter().filter(|&&x| x != 0).count() as i64;
            good == d - 2 * zeta + eta && all == d - zeta + 2 * eta
        };
        check(&row) && check(&col)
    })
}

struct Report {
    failures: Vec<usize>,
    identity_checks: usize,
    identity_failures: usize,
}

impl Report {
    fn line(&mut self, id: usize, ok: bool, what: &str, detail: String, took: Duration) {
        println!(
            "{} criterion {id:>2}: {what} [{detail}; {:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        if !ok {
            self.failures.push(id);
        }
    }

    fn touch(&mut self, l: &Encoding) {
        self.identity_checks += 1;
        if !identities_hold(l) {
            self.identity_failures += 1;
        }
    }
}

fn criterion_1(r: &mut Report) {
    let t0 = Instant::now();
    let d = seq(&[1, 2, 2, 1]);
    let states = enumerate::enum_states(&d, DEFAULT_CAP).unwrap();
    let sg = enumerate::switch_graph(&states, Variant::Exact);
    let want = vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 3), rat(2, 3)]];
    let matrix_ok = states.len() == 2 && sg.matrix() == want;
    // Eigenvalues 1 and 1/3: TV(t) = (1/2) (1/3)^t.
    let curve = sg.tv_curve(0, 12);
    let curve_ok = curve.iter().enumerate().all(|(t, tv)| *tv == rat(1, 2 * 3_i64.pow(t as u32)));
    let tau = enumerate::analyze(&d, Variant::Exact, 0, 0.01, DEFAULT_CAP, 1000).unwrap().mixing_time;
    let took = t0.elapsed();
    r.line(
        1,
        matrix_ok && curve_ok && tau == Some(4) && took < Duration::from_secs(1),
        "exact chain law on (1,2,2,1)",
        format!("P exact: {matrix_ok}, TV(t)=(1/2)(1/3)^t for t<=12: {curve_ok}, tau(0.01)={tau:?}"),
        took,
    );
}

fn criterion_2(r: &mut Report) {
    let t0 = Instant::now();
    let d = seq(&[2; 6]);
    let brute = brute_graphs(d.degrees());
    let states = enumerate::enum_states(&d, DEFAULT_CAP).unwrap();
    let edges: Vec<Edges> = states.iter().map(Graph::sorted_edges).collect();
    let same_space = brute.len() == 70 && edges.iter().cloned().collect::<HashSet<_>>() == brute.iter().cloned().collect();
    let sg = enumerate::switch_graph(&states, Variant::Exact);
    let p = sg.matrix();
    let oracle = oracle_matrix(&edges);
    let n = p.len();
    let matches = p == oracle;
    let symmetric = (0..n).all(|i| (0..n).all(|j| p[i][j] == p[j][i]));
    let rows = p.iter().all(|row| row.iter().fold(BigRational::zero(), |a, b| a + b) == BigRational::one());
    let diag = (0..n).all(|i| p[i][i] >= rat(1, 3));
    let u = vec![rat(1, n as i64); n];
    let stationary = step(&u, &p) == u;
    let curve = sg.tv_curve(0, 200);
    let monotone = curve.windows(2).all(|w| w[1] <= w[0]);
    // Cross-check the first steps of the curve against dense multiplication.
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::one();
    let mut dense_ok = true;
    for tv in curve.iter().take(6) {
        dense_ok &= tv_uniform(&v) == *tv;
        v = step(&v, &p);
    }
    let tv200 = curve[200].clone();
    let ok = same_space && matches && symmetric && rows && diag && stationary && monotone && dense_ok && tv200 < rat(1, 100);
    let took = t0.elapsed();
    r.line(
        2,
        ok && took < Duration::from_secs(30),
        "uniform stationarity and symmetry on (2,2,2,2,2,2)",
        format!(
            "|Omega|={} (brute force {}), P=oracle: {matches}, symmetric: {symmetric}, rows: {rows}, diag>=1/3: {diag}, uP=u: {stationary}, TV monotone: {monotone}, TV(200)={:.3e}",
            states.len(),
            brute.len(),
            num_traits::ToPrimitive::to_f64(&tv200).unwrap()
        ),
        took,
    );
}

fn criterion_3(r: &mut Report) {
    let t0 = Instant::now();
    let d = seq(&[2; 6]);
    let states = enumerate::enum_states(&d, DEFAULT_CAP).unwrap();
    let index: HashMap<Edges, usize> = states.iter().enumerate().map(|(i, g)| (g.sorted_edges(), i)).collect();
    // Thin by the exact worst-start mixing time at 1e-4.
    let sg = enumerate::switch_graph(&states, Variant::Exact);
    let thin = sg.mixing_time(&rat(1, 10_000), 10_000).unwrap() as u64;
    let mut chain = UndirectedChain::new(realize(&d).unwrap(), Variant::Exact, 20261018, 0).unwrap();
    let samples = chain.sample(thin, thin, 70_000).unwrap();
    let mut counts = vec![0u64; states.len()];
    for g in &samples {
        counts[index[&g.sorted_edges()]] += 1;
    }
    let n = samples.len() as f64;
    let k = states.len() as f64;
    let tv = counts.iter().map(|&c| (c as f64 / n - 1.0 / k).abs()).sum::<f64>() / 2.0;
    let expected = n / k;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let pval = 1.0 - ChiSquared::new(k - 1.0).unwrap().cdf(chi2);
    let took = t0.elapsed();
    r.line(
        3,
        tv < 0.05 && pval > 0.001 && took < Duration::from_secs(60),
        "empirical uniformity over 70 states",
        format!("70000 samples, thin={thin}, TV={tv:.4}, chi2={chi2:.1} (df 69), p={pval:.3}"),
        took,
    );
}

fn random_graph(n: usize, prob: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn criterion_4(r: &mut Report) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=10);
        let g = random_graph(n, rng.gen_range(0.1..0.9), &mut rng);
        let d = seq(g.degrees());
        let h = realize(&d).unwrap();
        let e: Edges = h.edges().collect();
        let brute = (0..e.len()).flat_map(|i| (i + 1..e.len()).map(move |j| (i, j))).filter(|&(i, j)| disjoint(e[i], e[j])).count();
        let m: i64 = d.degrees().iter().map(|&x| x as i64).sum();
        let m2: i64 = d.degrees().iter().map(|&x| x as i64 * (x as i64 - 1)).sum();
        let half = m / 2;
        let formula = half * (half - 1) / 2 - m2 / 2;
        let lib = switchmix::chain::nonadjacent_pairs(d.degrees());
        if brute as i64 == formula && lib == BigInt::from(formula) {
            ok += 1;
        }
    }
    r.line(
        4,
        ok == 100,
        "non-adjacent edge-pair count C(M/2,2) - M2/2",
        format!("{ok}/100 random graphical sequences agree with brute force"),
        t0.elapsed(),
    );
}

/// Non-increasing sequences of length `n` with entries below `n`.
fn sorted_sequences(n: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in (0..=max).rev() {
            cur.push(x);
            rec(n, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.saturating_sub(1) as u32, &mut Vec::new(), &mut out);
    out
}

fn criterion_5(r: &mut Report) {
    let t0 = Instant::now();
    let (mut checked, mut states, mut disconnected) = (0, 0usize, Vec::new());
    for n in 1..=7 {
        for d in sorted_sequences(n) {
            let d = seq(&d);
            if !d.is_graphical() {
                continue;
            }
            let c = irreducibility::switch_connectivity(&d, DEFAULT_CAP).unwrap();
            checked += 1;
            states += c.states;
            if !c.irreducible {
                disconnected.push(d.degrees().to_vec());
            }
        }
    }
    r.line(
        5,
        disconnected.is_empty(),
        "undirected switch graph connected for all graphical d, n <= 7",
        format!("{checked} sequences up to relabelling, {states} states, {} disconnected", disconnected.len()),
        t0.elapsed(),
    );
}

fn criterion_6(r: &mut Report) {
    let t0 = Instant::now();
    let dd = DirectedDegreeSequence::new(vec![(1, 1); 3]).unwrap();
    let c = irreducibility::switch_connectivity_directed(&dd, DEFAULT_CAP).unwrap();
    let states = enumerate::enum_states_directed(&dd, DEFAULT_CAP).unwrap();
    let no_witness = states.iter().all(|g| find_useful(g, [0, 1, 2]).unwrap().is_none());
    r.line(
        6,
        c.states == 2 && c.transitions == 0 && !c.irreducible && no_witness,
        "directed 3-cycle space is reducible",
        format!(
            "states={}, transitions={}, irreducible={}, no useful witness in either state: {no_witness}",
            c.states, c.transitions, c.irreducible
        ),
        t0.elapsed(),
    );
}

/// Multisets of `n` pairs `(in, out)` with entries below `n`.
fn sorted_pair_sequences(n: usize) -> Vec<Vec<(u32, u32)>> {
    let all: Vec<(u32, u32)> = (0..n as u32).flat_map(|i| (0..n as u32).map(move |o| (i, o))).collect();
    fn rec(all: &[(u32, u32)], n: usize, start: usize, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in start..all.len() {
            cur.push(all[k]);
            rec(all, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&all, n, 0, &mut Vec::new(), &mut out);
    out
}

fn criterion_7(r: &mut Report) {
    let t0 = Instant::now();
    let (mut sequences, mut cycles, mut counterexamples) = (0, 0usize, Vec::new());
    for n in 3..=5 {
        for pairs in sorted_pair_sequences(n) {
            let dd = DirectedDegreeSequence::new(pairs).unwrap();
            if !dd.is_digraphical() {
                continue;
            }
            let states = enumerate::enum_states_directed(&dd, DEFAULT_CAP).unwrap();
            let sg = enumerate::switch_graph_directed(&states);
            if sg.components().count() != 1 {
                continue;
            }
            sequences += 1;
            for g in &states {
                for u in induced_three_cycles(g) {
                    cycles += 1;
                    if find_useful(g, u).unwrap().is_none() {
                        counterexamples.push((dd.pairs().to_vec(), g.sorted_arcs(), u));
                    }
                }
            }
        }
    }
    let detail = match counterexamples.first() {
        None => format!("{sequences} irreducible sequences, {cycles} induced 3-cycles, 0 counterexamples"),
        Some((pairs, arcs, u)) => format!(
            "{sequences} irreducible sequences, {cycles} induced 3-cycles, {} counterexamples; first: (in,out)={pairs:?} arcs={arcs:?} cycle={u:?}",
            counterexamples.len()
        ),
    };
    r.line(7, counterexamples.is_empty(), "every induced 3-cycle in an irreducible space has a useful witness", detail, t0.elapsed());
}

fn random_digraph(n: usize, prob: f64, rng: &mut impl Rng) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(prob) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, &arcs).unwrap()
}

fn undirected_profiles() -> Vec<(usize, usize)> {
    vec![(1, 0), (2, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1), (1, 3), (2, 2)]
}

fn directed_profiles() -> Vec<(usize, usize)> {
    (0..=3).flat_map(|p| (0..=3).map(move |q| (p, q))).filter(|&(p, q)| p + q >= 1 && p + q <= 5).collect()
}

/// A generator-produced encoding on a random small (di)graph.
fn random_encoding(mode: Mode, rng: &mut ChaCha8Rng) -> Encoding {
    loop {
        let n = rng.gen_range(6..=12);
        let (z, start) = match mode {
            Mode::Undirected => {
                let g = random_graph(n, rng.gen_range(0.2..0.6), rng);
                if g.edge_count() < 2 || switchmix::chain::nonadjacent_pairs(g.degrees()).is_zero() {
                    continue;
                }
                let mut ch = UndirectedChain::new(g.clone(), Variant::Exact, rng.gen(), 0).unwrap();
                ch.advance(200).unwrap();
                (Encoding::from_graph(&g), Encoding::from_graph(ch.graph()))
            }
            Mode::Directed => {
                let g = random_digraph(n, rng.gen_range(0.15..0.5), rng);
                if g.arc_count() < 2 {
                    continue;
                }
                let mut ch = DirectedChain::new(g.clone(), rng.gen(), 0).unwrap();
                ch.advance(200).unwrap();
                (Encoding::from_digraph(&g), Encoding::from_digraph(ch.digraph()))
            }
        };
        let profiles = match mode {
            Mode::Undirected => undirected_profiles(),
            Mode::Directed => directed_profiles(),
        };
        let (p, q) = if rng.gen_bool(0.2) { (0, 0) } else { *profiles.choose(rng).unwrap() };
        if (p, q) == (0, 0) {
            return start;
        }
        if let Ok(l) = generate(&z, &start, &Plan::new(mode, p, q).unwrap(), 5, rng) {
            return l;
        }
    }
}

fn criterion_8(r: &mut Report) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut cases, mut violations, mut worst) = (0, 0, i64::MAX);
    for i in 0..1000 {
        let mode = if i % 2 == 0 { Mode::Undirected } else { Mode::Directed };
        let l = random_encoding(mode, &mut rng);
        r.touch(&l);
        let n = l.n();
        let nonzero: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v && l.get(u, v) != 0).collect();
        let Some(&(a1, b1)) = nonzero.choose(&mut rng) else { continue };
        let mut stages = vec![Anchors::Second { a1, b1 }];
        let ones: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && ![a1, b1].contains(&u) && ![a1, b1].contains(&v) && l.get(u, v) == 1)
            .collect();
        if let Some(&(a2, b2)) = ones.choose(&mut rng) {
            stages.push(Anchors::Third { a1, b1, a2, b2 });
        }
        for a in stages {
            let c = choice_count_and_bound(&l, a).unwrap();
            cases += 1;
            worst = worst.min(c.exact - c.bound);
            if c.exact < c.bound {
                violations += 1;
            }
        }
    }
    r.line(
        8,
        violations == 0 && cases >= 1000,
        "choice-count lower bounds are sound",
        format!("1000 encodings, {cases} anchor cases, {violations} violations, min(exact - bound)={worst}"),
        t0.elapsed(),
    );
}

fn undirected_instance(rng: &mut ChaCha8Rng) -> DegreeSequence {
    loop {
        let n = rng.gen_range(30..=45);
        let mut d: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        d[0] = 3;
        let d = seq(&d);
        if d.classify().mixing_bound_applies {
            return d;
        }
    }
}

fn directed_instance(rng: &mut ChaCha8Rng) -> DirectedDegreeSequence {
    loop {
        let n = rng.gen_range(32..=40);
        let outs: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let mut ins = outs.clone();
        ins.shuffle(rng);
        let dd = DirectedDegreeSequence::from_in_out(&ins, &outs).unwrap();
        if dd.is_digraphical() && dd.classify().unwrap().mixing_bound_degrees_ok {
            return dd;
        }
    }
}

fn criterion_9(r: &mut Report) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut stats = [(0usize, 0usize, 0usize); 2];
    let mut longest = [0usize; 2];
    let mut failures: Vec<String> = Vec::new();
    while stats[0].0 < 500 {
        let d = undirected_instance(&mut rng);
        let mut ch = UndirectedChain::new(realize(&d).unwrap(), Variant::Exact, rng.gen(), 0).unwrap();
        ch.advance(5000).unwrap();
        let z = Encoding::from_graph(ch.graph());
        ch.advance(5000).unwrap();
        let start = Encoding::from_graph(ch.graph());
        for _ in 0..10 {
            let (p, q) = *undirected_profiles().choose(&mut rng).unwrap();
            let Ok(l) = generate(&z, &start, &Plan::new(Mode::Undirected, p, q).unwrap(), 20, &mut rng) else {
                stats[0].2 += 1;
                continue;
            };
            stats[0].0 += 1;
            r.touch(&l);
            match repair(&l) {
                Ok(out) => {
                    r.touch(&out.encoding);
                    let g = out.encoding.to_graph();
                    let ok = out.log.len() <= 3 && g.as_ref().is_ok_and(|g| g.degrees() == d.degrees() && g.audit().is_ok());
                    longest[0] = longest[0].max(out.log.len());
                    if ok {
                        stats[0].1 += 1;
                    } else if failures.len() < 3 {
                        failures.push(format!("undirected ({p},{q}) took {} switches", out.log.len()));
                    }
                }
                Err(e) => {
                    if failures.len() < 3 {
                        failures.push(format!("undirected ({p},{q}): {e}"));
                    }
                }
            }
            if stats[0].0 == 500 {
                break;
            }
        }
    }
    while stats[1].0 < 500 {
        let dd = directed_instance(&mut rng);
        let mut ch = DirectedChain::new(realize_directed(&dd).unwrap(), rng.gen(), 0).unwrap();
        ch.advance(5000).unwrap();
        let z = Encoding::from_digraph(ch.digraph());
        ch.advance(5000).unwrap();
        let start = Encoding::from_digraph(ch.digraph());
        for _ in 0..10 {
            let (p, q) = *directed_profiles().choose(&mut rng).unwrap();
            let Ok(l) = generate(&z, &start, &Plan::new(Mode::Directed, p, q).unwrap(), 20, &mut rng) else {
                stats[1].2 += 1;
                continue;
            };
            stats[1].0 += 1;
            r.touch(&l);
            match repair(&l) {
                Ok(out) => {
                    r.touch(&out.encoding);
                    let g = out.encoding.to_digraph();
                    let ok = out.log.len() <= 5
                        && g.as_ref().is_ok_and(|g| g.in_degrees() == dd.in_degrees().as_slice() && g.out_degrees() == dd.out_degrees().as_slice() && g.audit().is_ok());
                    longest[1] = longest[1].max(out.log.len());
                    if ok {
                        stats[1].1 += 1;
                    } else if failures.len() < 3 {
                        failures.push(format!("directed ({p},{q}) took {} switches", out.log.len()));
                    }
                }
                Err(e) => {
                    if failures.len() < 3 {
                        failures.push(format!("directed ({p},{q}): {e}"));
                    }
                }
            }
            if stats[1].0 == 500 {
                break;
            }
        }
    }
    let ok = stats[0].1 == 500 && stats[1].1 == 500;
    r.line(
        9,
        ok,
        "repair caps: <= 3 undirected, <= 5 directed 3-switches",
        format!(
            "undirected {}/500 (longest {}), directed {}/500 (longest {}), generator retries {}/{}{}",
            stats[0].1,
            longest[0],
            stats[1].1,
            longest[1],
            stats[0].2,
            stats[1].2,
            if failures.is_empty() { String::new() } else { format!("; e.g. {}", failures.join(", ")) }
        ),
        t0.elapsed(),
    );
}

fn criterion_10(r: &mut Report) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut instances, mut size_ok, mut product_ok) = (0, 0, 0);
    while instances < 50 {
        let n = rng.gen_range(3..=8);
        let g = random_graph(n, rng.gen_range(0.2..0.8), &mut rng);
        if g.edge_count() == 0 {
            continue;
        }
        let d = seq(g.degrees());
        instances += 1;
        let count = enumerate::enum_states(&d, DEFAULT_CAP).unwrap().len();
        let c = bounds::flow_components(&d).unwrap();
        if BigRational::from_integer(BigInt::from(count)) <= c.size_bound {
            size_ok += 1;
        }
        if c.product(0.05).unwrap() == bounds::mixing_bound(&d, 0.05).unwrap().value {
            product_ok += 1;
        }
    }
    let mut directed_ok = true;
    for _ in 0..10 {
        let g = random_digraph(rng.gen_range(3..=5), 0.4, &mut rng);
        if g.arc_count() == 0 {
            continue;
        }
        let dd = DirectedDegreeSequence::from_in_out(g.in_degrees(), g.out_degrees()).unwrap();
        let count = enumerate::enum_states_directed(&dd, DEFAULT_CAP).unwrap().len();
        let c = bounds::flow_components_directed(&dd).unwrap();
        directed_ok &= BigRational::from_integer(BigInt::from(count)) <= c.size_bound;
        directed_ok &= c.product(0.05).unwrap() == bounds::mixing_bound_directed(&dd, 0.05).unwrap().value;
    }
    let report = bounds::mixing_bound(&seq(&[3; 28]), 0.01).unwrap();
    let want = 3f64.powi(14) * 84f64.powi(9) * (42.0 * 84f64.ln() + 100f64.ln());
    let rel = (report.value_f64() - want).abs() / want;
    let ok = size_ok == 50 && product_ok == 50 && directed_ok && rel < 5e-13 && report.applicability.applicable;
    r.line(
        10,
        ok,
        "bound calculators",
        format!(
            "size bound holds {size_ok}/50, product == bound {product_ok}/50, directed checks {directed_ok}, undirected bound value {} (f64 oracle {want:.11e}, rel err {rel:.1e})",
            report.value.to_scientific(12)
        ),
        t0.elapsed(),
    );
}

fn criterion_11(r: &mut Report) {
    let t0 = Instant::now();
    // Exhaustive encodings on tiny instances feed the same counter.
    let six_cycle = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
    let tiny = [
        encoding::Encoding::from_graph(&six_cycle),
        encoding::Encoding::from_graph(&Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap()),
        encoding::Encoding::from_digraph(&Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()),
    ];
    for z in &tiny {
        for l in enumerate::enum_good_encodings(z, DEFAULT_CAP).unwrap() {
            r.touch(&l);
        }
    }
    let ok = r.identity_failures == 0 && r.identity_checks > 0;
    r.line(
        11,
        ok,
        "counting identities on every encoding touched",
        format!("{} encodings checked, {} failures", r.identity_checks, r.identity_failures),
        t0.elapsed(),
    );
}

fn main() {
    // `cargo test` passes harness flags; listing asks for the test names only.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut r = Report {
        failures: Vec::new(),
        identity_checks: 0,
        identity_failures: 0,
    };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    criterion_10(&mut r);
    criterion_11(&mut r);
    if r.failures.is_empty() {
        println!("acceptance: all 11 criteria pass");
    } else {
        println!("acceptance: failing criteria {:?}", r.failures);
        std::process::exit(1);
    }
}
