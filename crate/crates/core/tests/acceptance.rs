//! Acceptance criteria, one line per criterion. Exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropmod::cone::{reduce_diagram, Diagram, ExtendedPoint, FaceMorphism, OrthantCone};
use tropmod::graph::{canonical_form, enumerate_stable_graphs, WeightedGraph};
use tropmod::moduli::ModuliSpace;
use tropmod::perm::Perm;
use tropmod::sample::{random_curve, random_length, random_perm, random_relabel};
use tropmod::tautological::{
    clutch, clutch_xy, fiber_check, forget, glue, glue_xy, quotient_by_automorphisms, sample_positions, section,
    attach_leg, Position,
};
use tropmod::verify::boundary_check;
use tropmod::{Curve, Length, Rational};

use common::{brute_key, curve_iso, graph_iso, stable_graphs, types_up_to};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn l(x: i64) -> Length {
    Length::integer(x)
}

fn frac(p: i64, q: i64) -> Length {
    Length::fraction(p, q)
}

fn curve(weights: Vec<u32>, ends: Vec<[usize; 2]>, legs: Vec<usize>, lengths: Vec<Length>) -> Curve {
    Curve::new(WeightedGraph::new(weights, ends, legs).unwrap(), lengths).unwrap()
}

fn stratum_counts() -> Outcome {
    for (g, n, expected) in [(1, 1, 2), (0, 3, 1), (0, 4, 4), (2, 0, 7)] {
        let got = enumerate_stable_graphs(g, n).map_err(|e| e.to_string())?.len();
        ensure!(got == expected, "({g}, {n}): {got} classes, expected {expected}");
    }
    let mut total = 0;
    for (g, n) in types_up_to(4) {
        let ours = enumerate_stable_graphs(g, n).map_err(|e| e.to_string())?;
        let oracle = stable_graphs(g, n);
        ensure!(ours.len() == oracle.len(), "({g}, {n}): {} classes, oracle {}", ours.len(), oracle.len());
        let ours_keys: BTreeSet<_> = ours.iter().map(brute_key).collect();
        let oracle_keys: BTreeSet<_> = oracle.iter().map(brute_key).collect();
        ensure!(ours_keys.len() == ours.len(), "({g}, {n}): enumeration repeats a class");
        ensure!(ours_keys == oracle_keys, "({g}, {n}): classes differ from the oracle");
        total += ours.len();
    }
    Ok(format!("{} types, {total} classes", types_up_to(4).len()))
}

fn dimension_law() -> Outcome {
    for (g, n) in types_up_to(4) {
        let space = ModuliSpace::build(g, n).map_err(|e| e.to_string())?;
        let d = 3 * g as usize + n - 3;
        ensure!(space.max_dim() == d, "({g}, {n}): max dim {} != {d}", space.max_dim());
        let zeros = space.strata().iter().filter(|s| s.dim() == 0).count();
        ensure!(zeros == 1, "({g}, {n}): {zeros} zero-dimensional strata");
        for (i, s) in space.strata().iter().enumerate() {
            ensure!(s.dim() == s.graph.num_edges(), "({g}, {n}) stratum {i}: rank != |E|");
            ensure!(space.complex().cones()[i].dim() == s.dim(), "({g}, {n}) stratum {i}: cone dim");
        }
    }
    Ok(String::new())
}

fn section_identity() -> Outcome {
    let mut r = rng(3);
    let mut checked = 0;
    for (g, n) in types_up_to(4) {
        if n == 0 {
            continue;
        }
        let space = ModuliSpace::build(g, n).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let c: Curve = random_curve(&mut r, &space, 0.2);
            let p = space.locate(&c).map_err(|e| e.to_string())?;
            for i in 0..n {
                let s = section(&c, i).map_err(|e| e.to_string())?;
                ensure!(s.is_stable(), "section {i} of {:?} unstable", c);
                let (back, _) = forget(&s).map_err(|e| e.to_string())?;
                let q = space.locate(&back).map_err(|e| e.to_string())?;
                ensure!(p == q && back.canonical_form() == c.canonical_form(), "({g}, {n}) leg {i}: {c:?}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} sections"))
}

fn boundary_cover() -> Outcome {
    let mut r = rng(4);
    let mut types = 0;
    for (g, n) in types_up_to(3) {
        let space = ModuliSpace::build(g, n).map_err(|e| e.to_string())?;
        let check = boundary_check(&space, &mut r).map_err(|e| e.to_string())?;
        ensure!(check.passed(), "({g}, {n}): {}", check.counterexample.unwrap());
        types += check.checked;
        // conversely the images of gluing and clutching are boundary curves
        if n >= 2 {
            for _ in 0..20 {
                let c: Curve = random_curve(&mut r, &space, 0.2);
                let glued = glue(&c).map_err(|e| e.to_string())?;
                ensure!(!glued.infinite_part().0.is_empty(), "glue of {c:?} is finite");
            }
        }
        if n >= 1 {
            let other = ModuliSpace::build(1, 1).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let a: Curve = random_curve(&mut r, &space, 0.0);
                let b: Curve = random_curve(&mut r, &other, 0.0);
                let clutched = clutch(&a, &b).map_err(|e| e.to_string())?;
                ensure!(!clutched.infinite_part().0.is_empty(), "clutch of {a:?} is finite");
            }
        }
    }
    Ok(format!("{types} boundary types"))
}

fn generalized_maps() -> Outcome {
    let grid = [frac(1, 2), l(1), frac(3, 2), l(2), Length::Infinite];
    let pairs: Vec<(Length, Length)> =
        grid.iter().flat_map(|x| grid.iter().map(move |y| (x.clone(), y.clone()))).collect();
    assert_eq!(pairs.len(), 25);

    let glue_inputs = [
        Curve::point(0, 3),
        Curve::point(1, 2),
        curve(vec![0, 0], vec![[0, 1], [0, 0]], vec![1, 1], vec![frac(7, 3), l(1)]),
    ];
    for c in &glue_inputs {
        let mut by_sum: BTreeMap<Length, BTreeSet<_>> = BTreeMap::new();
        for (x, y) in &pairs {
            let out = glue_xy(c, x, y).map_err(|e| e.to_string())?;
            by_sum.entry(x.clone() + y.clone()).or_default().insert(out.canonical_form());
        }
        ensure!(by_sum.values().all(|forms| forms.len() == 1), "glue_xy of {c:?} depends on more than x+y");
        let distinct: BTreeSet<_> = by_sum.values().flatten().collect();
        ensure!(distinct.len() == by_sum.len(), "glue_xy of {c:?} merges different sums");
        let at_inf = glue_xy(c, &Length::Infinite, &Length::Infinite).map_err(|e| e.to_string())?;
        ensure!(at_inf == glue(c).map_err(|e| e.to_string())?, "glue_xy(inf, inf) != glue");
    }

    let clutch_inputs = [
        (Curve::point(1, 1), Curve::point(1, 2)),
        (Curve::point(0, 3), curve(vec![0], vec![[0, 0]], vec![0], vec![l(4)])),
    ];
    for (a, b) in &clutch_inputs {
        let mut by_sum: BTreeMap<Length, BTreeSet<_>> = BTreeMap::new();
        for (x, y) in &pairs {
            let out = clutch_xy(a, b, x, y).map_err(|e| e.to_string())?;
            by_sum.entry(x.clone() + y.clone()).or_default().insert(out.canonical_form());
        }
        ensure!(by_sum.values().all(|forms| forms.len() == 1), "clutch_xy depends on more than x+y");
        let at_inf = clutch_xy(a, b, &Length::Infinite, &Length::Infinite).map_err(|e| e.to_string())?;
        ensure!(at_inf == clutch(a, b).map_err(|e| e.to_string())?, "clutch_xy(inf, inf) != clutch");
    }
    Ok(format!("{} curves x 25 pairs", glue_inputs.len() + clutch_inputs.len()))
}

fn fiber_quotient() -> Outcome {
    let base = ModuliSpace::build(1, 1).map_err(|e| e.to_string())?;
    let next = ModuliSpace::build(1, 2).map_err(|e| e.to_string())?;
    for d in [l(1), l(2), frac(5, 2)] {
        let gamma = curve(vec![0], vec![[0, 0]], vec![0], vec![d.clone()]);
        let q = quotient_by_automorphisms(&gamma);
        ensure!(q.folds() == 1, "Γ_{d}: {} folds", q.folds());
        ensure!(q.total_length() == d.half(), "Γ_{d}: quotient length {}", q.total_length());
        let result = fiber_check(&next, &base, &gamma, &sample_positions(&gamma)).map_err(|e| e.to_string())?;
        ensure!(result.passed(), "Γ_{d}: {result:?}");
        // opposite points of the loop give the same curve, the fold point is fixed
        let at = |t: Length| Position::Along { half: 0, distance: t };
        let p = |t: Length| next.locate(&attach_leg(&gamma, &at(t)).unwrap()).unwrap();
        let quarter = d.half().half();
        let three = d.minus(quarter.as_finite().unwrap());
        ensure!(p(quarter.clone()) == p(three), "Γ_{d}: d/4 and 3d/4 differ");
        ensure!(p(quarter) != p(d.half()), "Γ_{d}: d/4 and d/2 agree");
    }

    let point = Curve::point(1, 1);
    let configurations = [
        Position::Vertex(0),
        Position::Along { half: 0, distance: l(1) },
        Position::Along { half: 0, distance: Length::Infinite },
    ];
    let result = fiber_check(&next, &base, &point, &configurations).map_err(|e| e.to_string())?;
    ensure!(result.passed(), "•_(1,1): {result:?}");
    let points: Vec<_> = configurations
        .iter()
        .map(|p| next.locate(&attach_leg(&point, p).unwrap()).unwrap())
        .collect();
    let distinct: BTreeSet<_> = points.iter().collect();
    ensure!(distinct.len() == 3, "•_(1,1): configurations collide");
    ensure!(points[0].stratum == next.point_stratum(), "vertex configuration off the point stratum");
    ensure!(
        points[1].lengths == vec![l(1)] && points[2].lengths == vec![Length::Infinite],
        "leg configurations {:?}",
        &points[1..]
    );
    Ok(String::new())
}

fn monodromy() -> Outcome {
    let space = ModuliSpace::build(1, 1).map_err(|e| e.to_string())?;
    let loop_stratum = space.strata().iter().position(|s| s.dim() == 1).unwrap();
    ensure!(space.monodromy(loop_stratum).len() == 1, "(1,1) loop monodromy is not trivial");
    ensure!(space.stratum(loop_stratum).aut_order == 2, "(1,1) loop Aut has order != 2");

    let space = ModuliSpace::build(2, 0).map_err(|e| e.to_string())?;
    let theta = WeightedGraph::new(vec![0, 0], vec![[0, 1], [0, 1], [0, 1]], vec![]).unwrap();
    let i = space.stratum_of(&canonical_form(&theta)).unwrap();
    ensure!(space.monodromy(i).len() == 6, "theta |H| = {}", space.monodromy(i).len());

    let mut r = rng(7);
    let mut checked = 0;
    let small = |r: &mut ChaCha8Rng| if r.gen_bool(0.1) { Length::Infinite } else { l(r.gen_range(1..=3)) };
    for (g, n) in types_up_to(3) {
        let space = ModuliSpace::build(g, n).map_err(|e| e.to_string())?;
        for (i, s) in space.strata().iter().enumerate() {
            if s.dim() == 0 {
                continue;
            }
            for _ in 0..100 {
                let v: Vec<Length> = (0..s.dim()).map(|_| small(&mut r)).collect();
                let w = if r.gen_bool(0.5) {
                    random_perm(&mut r, s.dim()).permute(&v)
                } else {
                    (0..s.dim()).map(|_| small(&mut r)).collect()
                };
                let cv = Curve::new(s.graph.clone(), v.clone()).unwrap();
                let cw = Curve::new(s.graph.clone(), w.clone()).unwrap();
                let oracle = curve_iso(&cv, &cw);
                let p = space.point(i, v).map_err(|e| e.to_string())?;
                let q = space.point(i, w).map_err(|e| e.to_string())?;
                let ours = space.point_equal(&p, &q).map_err(|e| e.to_string())?;
                ensure!(ours == oracle, "({g}, {n}) stratum {i}: point_equal {ours}, oracle {oracle} for {cv:?} / {cw:?}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs"))
}

fn quotient_fixture() -> Outcome {
    let diagram = Diagram {
        cones: vec![OrthantCone::standard(2)],
        arrows: vec![FaceMorphism { source: 0, target: 0, map: vec![1, 0] }],
    };
    let complex = reduce_diagram(&diagram).map_err(|e| e.to_string())?;
    let top = complex.maximal_cones();
    ensure!(top.len() == 1, "{} maximal cones", top.len());
    let group = complex.self_group(top[0]);
    ensure!(group.len() == 2 && group.iter().any(|h| *h == Perm::from_images(vec![1, 0]).unwrap()), "H is not Z/2");

    let b = complex.barycentric_subdivision();
    ensure!(b.maximal_cones().len() == 1, "{} maximal barycentric cones", b.maximal_cones().len());
    let k = b.maximal_cones()[0];
    let mut r = rng(8);
    let mut seen: BTreeMap<ExtendedPoint<Rational>, Vec<Length>> = BTreeMap::new();
    for _ in 0..200 {
        let coefficients: Vec<Length> = (0..2).map(|_| random_length(&mut r, 0.0)).collect();
        let p = complex.normalize(&b.point(k, &coefficients, &complex)).map_err(|e| e.to_string())?;
        if let Some(prev) = seen.insert(p.clone(), coefficients.clone()) {
            ensure!(prev == coefficients, "interior points {prev:?} and {coefficients:?} collide");
        }
        let (k2, back) = b.locate(&complex, &p).map_err(|e| e.to_string())?;
        ensure!(k2 == k && back == coefficients, "locate does not invert the barycentric map");
    }

    let p = complex.input_point(0, vec![l(1), l(2)]).map_err(|e| e.to_string())?;
    let q = complex.input_point(0, vec![l(2), l(1)]).map_err(|e| e.to_string())?;
    ensure!(complex.point_equal(&p, &q).map_err(|e| e.to_string())?, "(1,2) and (2,1) differ");
    Ok(String::new())
}

fn canonicalization() -> Outcome {
    let mut r = rng(9);
    let mut pairs = 0;
    for (g, n) in types_up_to(4) {
        let classes = enumerate_stable_graphs(g, n).map_err(|e| e.to_string())?;
        // enumerated classes are pairwise non-isomorphic (criterion 1), so
        // distinct forms across all of them means no false merges
        let forms: BTreeSet<_> = classes.iter().map(canonical_form).collect();
        ensure!(forms.len() == classes.len(), "({g}, {n}): canonical forms merge classes");
        pairs += classes.len() * (classes.len() - 1) / 2;
        for graph in &classes {
            let c = Curve::new(graph.clone(), vec![l(1); graph.num_edges()]).unwrap();
            for _ in 0..3 {
                let copy = random_relabel(&mut r, &c);
                ensure!(canonical_form(copy.graph()) == canonical_form(graph), "({g}, {n}): relabeling splits a class");
            }
        }
    }

    // exhaustive pairs of relabeled copies, graphs and curves, for g + n <= 4
    let mut graphs = Vec::new();
    let mut curves = Vec::new();
    for (g, n) in types_up_to(4).into_iter().filter(|&(g, n)| g as usize + n <= 4) {
        for graph in enumerate_stable_graphs(g, n).map_err(|e| e.to_string())? {
            for _ in 0..2 {
                let lengths: Vec<Length> =
                    (0..graph.num_edges()).map(|_| if r.gen_bool(0.2) { Length::Infinite } else { l(r.gen_range(1..=2)) }).collect();
                let c = random_relabel(&mut r, &Curve::new(graph.clone(), lengths).unwrap());
                graphs.push(c.graph().clone());
                curves.push(c);
            }
        }
    }
    for a in 0..graphs.len() {
        for b in a..graphs.len() {
            let same = canonical_form(&graphs[a]) == canonical_form(&graphs[b]);
            ensure!(same == graph_iso(&graphs[a], &graphs[b]), "graph pair {a}, {b} disagrees with the oracle");
            let same = curves[a].canonical_form() == curves[b].canonical_form();
            ensure!(same == curve_iso(&curves[a], &curves[b]), "curve pair {a}, {b} disagrees with the oracle");
            pairs += 2;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("stratum counts", 10, stratum_counts),
        ("dimension law", 10, dimension_law),
        ("section identity", 30, section_identity),
        ("boundary cover round-trip", 30, boundary_cover),
        ("generalized maps", 10, generalized_maps),
        ("fiber = quotient", 10, fiber_quotient),
        ("monodromy", 30, monodromy),
        ("quotient-complex fixture", 1, quotient_fixture),
        ("canonicalization soundness", 60, canonicalization),
    ];
    let mut failures = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("over the {limit} s limit")),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => {
                let detail = if detail.is_empty() { String::new() } else { format!(", {detail}") };
                println!("criterion {}: PASS {name} ({secs:.2} s of {limit} s{detail})", k + 1);
            }
            Err(msg) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({secs:.2} s of {limit} s): {msg}", k + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
