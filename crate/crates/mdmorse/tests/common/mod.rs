#![allow(dead_code)]

pub mod checks;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use mdmorse::cli::{parse_input, InputBundle};
use mdmorse::complex::{close, CellId, CellSet, Simplex, SimplicialComplex};
use mdmorse::field::{DiscreteVectorField, Role};
use mdmorse::io::parse_simplex_list;
use mdmorse::mdm::MdmFunction;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FUNCTION_FIXTURES: &[&str] = &[
    "three_triangle_strip.fn",
    "kite_three_triangles.fn",
    "circle_all_critical.fn",
    "circle_one_pair.fn",
    "pareto_circle.fn",
    "square_f_cycle.fn",
];

pub const FIELD_FIXTURES: &[&str] = &[
    "full_triangle.field",
    "square_two_triangles.field",
    "triangle_one_fixed_vertex.field",
    "hexagon_disk.field",
    "rhombus_bottom_fixed.field",
    "rhombus_right_fixed.field",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn bundle(name: &str) -> InputBundle {
    parse_input(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn function(name: &str) -> MdmFunction {
    let mut f = bundle(name).function.expect("function fixture");
    assert!(f.validate().is_valid(), "{name} is not a valid mdm function");
    f
}

pub fn field(name: &str) -> DiscreteVectorField {
    bundle(name).field.expect("field fixture")
}

/// Cells of `text` (one simplex per line) resolved with the labels of `b`.
pub fn cells(b: &InputBundle, text: &str) -> CellSet {
    let mut labels = b.labels.clone();
    labels.freeze();
    let simplices = parse_simplex_list(text, &labels).unwrap();
    b.complex.set_of(&simplices).unwrap()
}

pub fn set_fixture(b: &InputBundle, name: &str) -> CellSet {
    cells(b, &fixture(name))
}

pub fn names(b: &InputBundle, set: impl IntoIterator<Item = CellId>) -> Vec<String> {
    set.into_iter().map(|c| b.labels.name(b.complex.simplex(c))).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random closed complex with at most `max` simplices.
pub fn random_complex(rng: &mut ChaCha8Rng, max: usize) -> Arc<SimplicialComplex> {
    let n = rng.gen_range(1..=6u32);
    let mut tops: Vec<Simplex> = Vec::new();
    let mut current: Vec<Simplex> = close((0..n).map(Simplex::vertex));
    for _ in 0..rng.gen_range(0..8) {
        let d = rng.gen_range(2..=n.clamp(2, 4));
        if d > n {
            break;
        }
        let mut vs: Vec<u32> = (0..n).collect();
        vs.shuffle(rng);
        vs.truncate(d as usize);
        tops.push(Simplex::new(vs).unwrap());
        let next = close(current.iter().cloned().chain(tops.iter().cloned()));
        if next.len() > max {
            tops.pop();
            continue;
        }
        current = next;
    }
    Arc::new(SimplicialComplex::new(current).unwrap())
}

/// Facet/cofacet incidences of `k` in random order.
fn shuffled_incidences(k: &SimplicialComplex, rng: &mut ChaCha8Rng) -> Vec<(CellId, CellId)> {
    let mut inc: Vec<(CellId, CellId)> =
        (0..k.len()).flat_map(|c| k.cofacets(c).iter().map(move |&h| (c, h))).collect();
    inc.shuffle(rng);
    inc
}

fn field_from_matching(k: &Arc<SimplicialComplex>, pairs: &[(CellId, CellId)]) -> DiscreteVectorField {
    let used: BTreeSet<CellId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let fixed: Vec<CellId> = (0..k.len()).filter(|c| !used.contains(c)).collect();
    DiscreteVectorField::new(k.clone(), pairs, &fixed).unwrap()
}

/// Greedy random matching kept acyclic after every insertion.
pub fn random_acyclic_field(k: &Arc<SimplicialComplex>, rng: &mut ChaCha8Rng) -> DiscreteVectorField {
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    for (t, h) in shuffled_incidences(k, rng) {
        if used.contains(&t) || used.contains(&h) || rng.gen_bool(0.2) {
            continue;
        }
        pairs.push((t, h));
        if field_from_matching(k, &pairs).is_acyclic() {
            used.insert(t);
            used.insert(h);
        } else {
            pairs.pop();
        }
    }
    field_from_matching(k, &pairs)
}

/// Greedy random matching with no acyclicity check; cyclic fields are common.
pub fn random_field(k: &Arc<SimplicialComplex>, rng: &mut ChaCha8Rng) -> DiscreteVectorField {
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    for (t, h) in shuffled_incidences(k, rng) {
        if !used.contains(&t) && !used.contains(&h) {
            used.insert(t);
            used.insert(h);
            pairs.push((t, h));
        }
    }
    field_from_matching(k, &pairs)
}

/// The flow rebuilt from the roles alone.
pub fn oracle_successors(v: &DiscreteVectorField) -> Vec<BTreeSet<CellId>> {
    let k = v.complex();
    (0..k.len())
        .map(|c| match v.role(c) {
            Role::Tail(h) => BTreeSet::from([h]),
            Role::Fixed => k.faces(c),
            Role::Head(t) => k.faces(c).into_iter().filter(|&x| x != c && x != t).collect(),
        })
        .collect()
}

/// Cells reachable from `from` by a walk of at least one step.
pub fn oracle_reach(succ: &[BTreeSet<CellId>], from: CellId) -> BTreeSet<CellId> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<CellId> = succ[from].iter().copied().collect();
    while let Some(x) = stack.pop() {
        if seen.insert(x) {
            stack.extend(succ[x].iter().copied());
        }
    }
    seen
}

/// A closed V-path exists iff some tail can return to itself through
/// facets of heads; searched by plain DFS over V-path steps.
pub fn oracle_has_closed_vpath(v: &DiscreteVectorField) -> bool {
    let k = v.complex();
    let step = |t: CellId| -> Vec<CellId> {
        let Role::Tail(h) = v.role(t) else { return Vec::new() };
        k.facets(h).iter().copied().filter(|&f| f != t && matches!(v.role(f), Role::Tail(_))).collect()
    };
    (0..k.len()).any(|start| {
        let mut seen = BTreeSet::new();
        let mut stack = step(start);
        while let Some(x) = stack.pop() {
            if x == start {
                return true;
            }
            if seen.insert(x) {
                stack.extend(step(x));
            }
        }
        false
    })
}

/// Brute-force closure: every vertex subset of a member that is a cell.
pub fn oracle_closure(k: &SimplicialComplex, a: &CellSet) -> CellSet {
    let mut out = CellSet::new();
    for &c in a {
        let vs = k.simplex(c).vertices().to_vec();
        for mask in 1u32..(1 << vs.len()) {
            let sub: Vec<u32> = (0..vs.len()).filter(|i| mask & (1 << i) != 0).map(|i| vs[i]).collect();
            out.insert(k.id_of(&Simplex::new(sub).unwrap()).expect("faces are cells"));
        }
    }
    out
}
