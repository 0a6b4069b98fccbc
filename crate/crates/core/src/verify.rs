//! Invariant suites over a built moduli space, with seeded random sampling.
//!
//! Each check records how many cases it covered and, on failure, the first
//! counterexample as JSON.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::graph::{check_stable_range, is_isomorphic, isomorphisms, WeightedGraph};
use crate::json::{curve_to_json, graph_to_json, witness_to_json};
use crate::moduli::ModuliSpace;
use crate::perm::Perm;
use crate::sample::{random_curve, random_length};
use crate::scalar::ExtendedLength;
use crate::tautological::{cover_boundary_at, fiber_check, forget, sample_positions, section};
use crate::Rational;

pub const DEFAULT_BOUND: usize = 4;
pub const BOUND_ENV: &str = "TROPMOD_BOUND";

type Curve = TropicalCurve<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    All,
    Poset,
    Monodromy,
    Sections,
    Boundary,
    Fibers,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["all", "poset", "monodromy", "sections", "boundary", "fibers"];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Poset => "poset",
            Suite::Monodromy => "monodromy",
            Suite::Sections => "sections",
            Suite::Boundary => "boundary",
            Suite::Fibers => "fibers",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "poset" => Suite::Poset,
            "monodromy" => Suite::Monodromy,
            "sections" => Suite::Sections,
            "boundary" => Suite::Boundary,
            "fibers" => Suite::Fibers,
            _ => return Err(Error::Precondition(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest allowed `3g-3+n`.
    pub bound: usize,
    pub seed: u64,
    /// Random curves per check.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { bound: DEFAULT_BOUND, seed: 0x7e0, samples: 50 }
    }
}

impl VerifyConfig {
    /// Default configuration with the bound taken from `TROPMOD_BOUND` if set.
    pub fn from_env() -> Result<Self> {
        let mut config = VerifyConfig::default();
        if let Ok(value) = std::env::var(BOUND_ENV) {
            config.bound = value
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("{BOUND_ENV}={value:?} is not a nonnegative integer")))?;
        }
        Ok(config)
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub checked: usize,
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub g: u32,
    pub n: usize,
    pub checks: Vec<Check>,
    /// Suites left out of `all`, with the reason.
    pub skipped: Vec<(Suite, String)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{status} {}/{} ({} checked)", c.suite, c.name, c.checked)?;
            if let Some(ex) = &c.counterexample {
                writeln!(f, "  counterexample: {ex}")?;
            }
        }
        for (suite, reason) in &self.skipped {
            writeln!(f, "skip {suite}: {reason}")?;
        }
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{verdict} ({}, {})", self.g, self.n)
    }
}

fn dim_of(g: u32, n: usize) -> usize {
    (3 * g as usize + n).saturating_sub(3)
}

fn check_bound(g: u32, n: usize, bound: usize) -> Result<()> {
    let d = dim_of(g, n);
    if d > bound {
        return Err(Error::Precondition(format!(
            "3g−3+n = {d} for (g, n) = ({g}, {n}) exceeds the verification bound {bound}; \
             raise it with --bound or {BOUND_ENV}"
        )));
    }
    Ok(())
}

/// Runs `suite` on `M̄_{g,n}`. `all` skips the fiber suite when `(g, n+1)`
/// is over the bound; asking for `fibers` directly refuses instead.
pub fn run(g: u32, n: usize, suite: Suite, config: &VerifyConfig) -> Result<Report> {
    check_stable_range(g, n)?;
    check_bound(g, n, config.bound)?;
    let space = ModuliSpace::build(g, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = Report { g, n, checks: Vec::new(), skipped: Vec::new() };
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Poset) {
        report.checks.extend(poset_checks(&space));
    }
    if wants(Suite::Monodromy) {
        report.checks.extend(monodromy_checks(&space, &mut rng, config.samples)?);
    }
    if wants(Suite::Sections) {
        report.checks.push(section_check(&space, &mut rng, config.samples)?);
    }
    if wants(Suite::Boundary) {
        report.checks.push(boundary_check(&space, &mut rng)?);
    }
    if wants(Suite::Fibers) {
        match check_bound(g, n + 1, config.bound) {
            Ok(()) => report.checks.push(fiber_suite(&space, &mut rng)?),
            Err(e) if suite == Suite::All => report.skipped.push((Suite::Fibers, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

fn check(suite: Suite, name: &'static str, checked: usize, counterexample: Option<Value>) -> Check {
    Check { suite, name, checked, counterexample }
}

fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << m).map(move |mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect())
}

/// Isomorphism invariant: edge count and sorted (weight, valence, legs) per vertex.
fn shape(g: &WeightedGraph) -> (usize, Vec<(u32, usize, usize)>) {
    let mut legs = vec![0; g.num_vertices()];
    for &v in g.legs() {
        legs[v] += 1;
    }
    let mut vertices: Vec<_> = (0..g.num_vertices()).map(|v| (g.weight(v), g.valence_unchecked(v), legs[v])).collect();
    vertices.sort_unstable();
    (g.num_edges(), vertices)
}

/// Dimension law and the closure order, checked against brute-force
/// contraction of every edge subset.
pub fn poset_checks(space: &ModuliSpace) -> Vec<Check> {
    let strata = space.strata();
    let d = dim_of(space.genus(), space.num_legs());
    let mut out = Vec::new();

    let zero: Vec<usize> = (0..strata.len()).filter(|&i| strata[i].dim() == 0).collect();
    let bad_rank = strata.iter().position(|s| s.dim() != s.graph.num_edges());
    let ex = if space.max_dim() != d || zero.len() != 1 || bad_rank.is_some() {
        Some(json!({"max_dim": space.max_dim(), "expected": d, "zero_strata": zero, "bad_rank": bad_rank}))
    } else {
        None
    };
    out.push(check(Suite::Poset, "dimension", strata.len(), ex));

    let poset = space.strata_poset();
    let mut ex = None;
    let mut checked = 0;
    let shapes: Vec<_> = strata.iter().map(|s| shape(&s.graph)).collect();
    'outer: for (b, upper) in strata.iter().enumerate() {
        let mut below = vec![false; strata.len()];
        for s in subsets(upper.dim()) {
            let target = upper.graph.contract(&s).expect("edge subsets contract").target;
            let target_shape = shape(&target);
            for (a, lower) in strata.iter().enumerate() {
                if !below[a] && shapes[a] == target_shape && is_isomorphic(&lower.graph, &target) {
                    below[a] = true;
                }
            }
        }
        for (a, &oracle) in below.iter().enumerate() {
            checked += 1;
            if poset.leq(a, b) != oracle {
                ex = Some(json!({"lower": a, "upper": b, "leq": poset.leq(a, b), "oracle": oracle,
                                 "lower_graph": graph_to_json(&strata[a].graph),
                                 "upper_graph": graph_to_json(&upper.graph)}));
                break 'outer;
            }
        }
    }
    out.push(check(Suite::Poset, "closure_order", checked, ex));

    let ex = if poset.minimum() != Some(space.point_stratum()) {
        Some(json!({"minimum": poset.minimum(), "point": space.point_stratum()}))
    } else {
        poset
            .maximal()
            .into_iter()
            .find(|&i| strata[i].dim() != d)
            .map(|i| json!({"maximal": i, "dim": strata[i].dim()}))
    };
    out.push(check(Suite::Poset, "extremes", strata.len(), ex));
    out
}

/// Edge permutations induced by all automorphisms, by exhaustive search.
fn edge_images_oracle(space: &ModuliSpace, i: usize) -> BTreeSet<Perm> {
    let g = &space.stratum(i).graph;
    isomorphisms(g, g)
        .iter()
        .map(|iso| Perm::from_images(iso.edge_map(g.num_edges())).expect("automorphisms permute edges"))
        .collect()
}

/// Monodromy groups against the automorphism oracle, and point equality
/// against explicit orbits on random length vectors.
pub fn monodromy_checks<R: Rng>(space: &ModuliSpace, rng: &mut R, samples: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut ex = None;
    for i in 0..space.strata().len() {
        let oracle = edge_images_oracle(space, i);
        let monodromy: BTreeSet<Perm> = space.monodromy(i).iter().cloned().collect();
        let complex: BTreeSet<Perm> = space.complex().self_group(i).iter().cloned().collect();
        if monodromy != oracle || complex != oracle {
            ex = Some(json!({"stratum": i, "graph": graph_to_json(&space.stratum(i).graph),
                             "monodromy_order": monodromy.len(), "oracle_order": oracle.len(),
                             "complex_order": complex.len()}));
            break;
        }
    }
    out.push(check(Suite::Monodromy, "groups", space.strata().len(), ex));

    let mut ex = None;
    let mut checked = 0;
    'outer: for i in 0..space.strata().len() {
        let dim = space.stratum(i).dim();
        if dim == 0 {
            continue;
        }
        let group = space.monodromy(i);
        for _ in 0..samples {
            // small values so that unrelated vectors collide now and then
            let v: Vec<ExtendedLength<Rational>> = (0..dim).map(|_| small_length(rng)).collect();
            let w = if rng.gen_bool(0.5) {
                crate::sample::random_perm(rng, dim).permute(&v)
            } else {
                (0..dim).map(|_| small_length(rng)).collect()
            };
            let oracle = group.iter().any(|h| h.permute(&v) == w);
            let p = space.point(i, v.clone())?;
            let q = space.point(i, w.clone())?;
            checked += 1;
            if space.point_equal(&p, &q)? != oracle {
                let text = |x: &[ExtendedLength<Rational>]| x.iter().map(|l| l.to_text()).collect::<Vec<_>>();
                ex = Some(json!({"stratum": i, "v": text(&v), "w": text(&w), "orbit": oracle}));
                break 'outer;
            }
        }
    }
    out.push(check(Suite::Monodromy, "point_equal", checked, ex));
    Ok(out)
}

fn small_length<R: Rng>(rng: &mut R) -> ExtendedLength<Rational> {
    if rng.gen_bool(0.1) {
        ExtendedLength::Infinite
    } else {
        ExtendedLength::integer(rng.gen_range(1..=3))
    }
}

/// `forget(section_i(c)) = c` as moduli points for random curves and every `i`.
pub fn section_check<R: Rng>(space: &ModuliSpace, rng: &mut R, samples: usize) -> Result<Check> {
    let mut checked = 0;
    for _ in 0..samples {
        let c: Curve = random_curve(rng, space, 0.2);
        let p = space.locate(&c)?;
        for i in 0..space.num_legs() {
            let s = section(&c, i)?;
            let (back, _) = forget(&s)?;
            checked += 1;
            if !s.is_stable() || space.locate(&back)? != p {
                let ex = json!({"curve": curve_to_json(&c), "leg": i + 1, "section": curve_to_json(&s),
                                "forget": curve_to_json(&back)});
                return Ok(check(Suite::Sections, "forget_after_section", checked, Some(ex)));
            }
        }
    }
    Ok(check(Suite::Sections, "forget_after_section", checked, None))
}

fn edge_orbit_representatives(space: &ModuliSpace, i: usize) -> Vec<usize> {
    let dim = space.stratum(i).dim();
    (0..dim)
        .filter(|&e| space.monodromy(i).iter().all(|h| h.apply(e) >= e))
        .collect()
}

/// For every stratum with an edge and every edge orbit, a curve with that
/// edge infinite is rebuilt from its boundary witness. `checked` counts the
/// strata covered.
pub fn boundary_check<R: Rng>(space: &ModuliSpace, rng: &mut R) -> Result<Check> {
    let mut checked = 0;
    for i in 0..space.strata().len() {
        let graph = &space.stratum(i).graph;
        if graph.num_edges() == 0 {
            continue;
        }
        checked += 1;
        for e in edge_orbit_representatives(space, i) {
            let mut lengths: Vec<ExtendedLength<Rational>> =
                (0..graph.num_edges()).map(|_| random_length(rng, 0.0)).collect();
            lengths[e] = ExtendedLength::Infinite;
            let c = Curve::new(graph.clone(), lengths)?;
            let witness = cover_boundary_at(&c, e)?;
            let image = witness.apply()?;
            if image.infinite_part().0.is_empty() || space.locate(&image)? != space.locate(&c)? {
                let ex = json!({"curve": curve_to_json(&c), "edge": e, "witness": witness_to_json(&witness),
                                "image": curve_to_json(&image)});
                return Ok(check(Suite::Boundary, "cover_round_trip", checked, Some(ex)));
            }
        }
    }
    Ok(check(Suite::Boundary, "cover_round_trip", checked, None))
}

/// The fiber of the forgetful map over one curve per stratum (finite
/// lengths, and again with an infinite first edge) matches `Γ/Aut(Γ)`.
pub fn fiber_suite<R: Rng>(space: &ModuliSpace, rng: &mut R) -> Result<Check> {
    let next = ModuliSpace::build(space.genus(), space.num_legs() + 1)?;
    let mut checked = 0;
    for stratum in space.strata() {
        let ne = stratum.graph.num_edges();
        let finite: Vec<ExtendedLength<Rational>> = (0..ne).map(|_| random_length(rng, 0.0)).collect();
        let mut variants = vec![finite.clone()];
        if ne > 0 {
            let mut with_inf = finite;
            with_inf[0] = ExtendedLength::Infinite;
            variants.push(with_inf);
        }
        for lengths in variants {
            let c = Curve::new(stratum.graph.clone(), lengths)?;
            let result = fiber_check(&next, space, &c, &sample_positions(&c))?;
            checked += 1;
            if !result.passed() {
                let ex = json!({"curve": curve_to_json(&c), "result": format!("{result:?}")});
                return Ok(check(Suite::Fibers, "fiber_is_quotient", checked, Some(ex)));
            }
        }
    }
    Ok(check(Suite::Fibers, "fiber_is_quotient", checked, None))
}
