//! Property checks shared by the proptest suite and the acceptance runner.
//! Each returns a description of the first counterexample.

use mdmorse::complex::{CellSet, SimplicialComplex};
use mdmorse::components::{component_decomposition, critical_components};
use mdmorse::dynamics::flow_of;
use mdmorse::field::{DiscreteVectorField, Role};
use mdmorse::homology::{betti, betti_of, boundary_matrices, boundary_squares_vanish};
use mdmorse::mdm::{field_to_mdm, validate_mdm, vec_leq, vec_lneq, MdmFunction, ValueVector};
use mdmorse::morse::{collapse_sublevels, extended_decomposition};
use mdmorse::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn field_to_mdm_round_trip(seed: u64) -> Check {
    let mut r = rng(seed);
    let k = random_complex(&mut r, 30);
    let v = random_acyclic_field(&k, &mut r);
    let arity = r.gen_range(1..=3);
    let f = field_to_mdm(&v, arity).map_err(|e| format!("seed {seed}: {e}"))?;
    ensure(validate_mdm(&f).is_valid(), || format!("seed {seed}: output not valid"))?;
    ensure(f.gradient().unwrap().same_as(&v), || format!("seed {seed}: gradient differs"))
}

pub fn acyclicity_agrees(seed: u64) -> Check {
    let mut r = rng(seed);
    let k = random_complex(&mut r, 30);
    for v in [random_acyclic_field(&k, &mut r), random_field(&k, &mut r)] {
        let field_says = v.is_acyclic();
        let flow_says = flow_of(&v).is_acyclic();
        let oracle = !oracle_has_closed_vpath(&v);
        ensure(field_says == flow_says && flow_says == oracle, || {
            format!("seed {seed}: field {field_says}, flow {flow_says}, oracle {oracle}")
        })?;
    }
    Ok(())
}

pub fn connects_matches_dfs(seed: u64) -> Check {
    let mut r = rng(seed);
    let k = random_complex(&mut r, 30);
    let v = if r.gen_bool(0.5) { random_field(&k, &mut r) } else { random_acyclic_field(&k, &mut r) };
    let flow = flow_of(&v);
    let succ = oracle_successors(&v);
    for x in 0..k.len() {
        let reach = oracle_reach(&succ, x);
        for y in 0..k.len() {
            ensure(flow.connects(x, y) == reach.contains(&y), || format!("seed {seed}: {x} -> {y}"))?;
        }
    }
    Ok(())
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A valid mdm function of arity `arity` with independent small noise per
/// coordinate on top of an integer rank, so coordinates disagree.
pub fn random_mdm(r: &mut ChaCha8Rng, arity: usize) -> (DiscreteVectorField, MdmFunction) {
    let k = random_complex(r, 30);
    let v = random_acyclic_field(&k, r);
    let g = field_to_mdm(&v, 1).unwrap();
    let mut values: Vec<Option<ValueVector>> = vec![None; k.len()];
    for c in 0..k.len() {
        if matches!(v.role(c), Role::Head(_)) {
            continue;
        }
        let base = &g.value(c).coords()[0];
        let coords: Vec<BigRational> =
            (0..arity).map(|_| base + rational(r.gen_range(-40..=40), 100)).collect();
        if let Role::Tail(h) = v.role(c) {
            let lower = coords.iter().map(|x| x - rational(r.gen_range(0..=10), 100)).collect();
            values[h] = Some(ValueVector::new(lower));
        }
        values[c] = Some(ValueVector::new(coords));
    }
    let mut f = MdmFunction::new(k, values.into_iter().map(Option::unwrap).collect()).unwrap();
    assert!(f.validate().is_valid(), "perturbed rank function must be valid");
    (v, f)
}

/// A valid arity-2 mdm function whose gradient is a random acyclic field:
/// the first coordinate is the longest flow path to a sink, the second only
/// weakly decreases along the flow, so coordinates often coincide.
pub fn random_layered_mdm(r: &mut ChaCha8Rng) -> (DiscreteVectorField, MdmFunction) {
    let k = random_complex(r, 30);
    let v = random_acyclic_field(&k, r);
    let flow = flow_of(&v);
    let n = k.len();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut state = vec![0u8; n];
    for root in 0..n {
        let mut stack = vec![(root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                state[x] = 2;
                order.push(x);
                continue;
            }
            if state[x] != 0 {
                continue;
            }
            state[x] = 1;
            stack.push((x, true));
            for &y in flow.successors(x) {
                if y != x && state[y] == 0 {
                    stack.push((y, false));
                }
            }
        }
    }
    let (mut depth, mut level) = (vec![0i64; n], vec![0i64; n]);
    for &x in &order {
        let succ: Vec<usize> = flow.successors(x).iter().copied().filter(|&y| y != x).collect();
        depth[x] = succ.iter().map(|&y| depth[y] + 1).max().unwrap_or(0);
        level[x] = succ.iter().map(|&y| level[y]).max().unwrap_or(0) + i64::from(r.gen_bool(0.2));
    }
    let values = (0..n).map(|c| ValueVector::from_ints(&[depth[c], level[c]])).collect();
    let mut f = MdmFunction::new(k, values).unwrap();
    assert!(f.validate().is_valid(), "layered function must be valid");
    assert!(f.gradient().unwrap().same_as(&v));
    (v, f)
}

/// Noisy and layered functions on alternate seeds.
pub fn either_mdm(seed: u64, r: &mut ChaCha8Rng) -> (DiscreteVectorField, MdmFunction) {
    if seed.is_multiple_of(2) {
        random_mdm(r, 2)
    } else {
        random_layered_mdm(r)
    }
}

pub fn critical_descent(f: &MdmFunction) -> Check {
    let flow = flow_of(&f.gradient().unwrap());
    let crit = f.critical_points().unwrap();
    for &s in &crit {
        for &t in &crit {
            if s != t && flow.connects(s, t) {
                ensure(vec_lneq(f.value(t), f.value(s)).unwrap(), || {
                    format!("{} does not descend to {}", f.value(s), f.value(t))
                })?;
            }
        }
    }
    Ok(())
}

/// Every coface of σ lies above some cofacet of σ with a smaller value.
pub fn cofacet_smaller_value(f: &MdmFunction) -> Check {
    let k = f.complex();
    for s in 0..k.len() {
        for t in 0..k.len() {
            let (ss, ts) = (k.simplex(s), k.simplex(t));
            if s == t || !ss.is_face_of(ts) {
                continue;
            }
            let found = k
                .cofacets(s)
                .iter()
                .any(|&b| k.simplex(b).is_face_of(ts) && vec_leq(f.value(b), f.value(t)).unwrap());
            ensure(found, || format!("no cofacet of {ss} below {ts}"))?;
        }
    }
    Ok(())
}

/// Five evenly spread parameters per coordinate, spanning the value range.
pub fn grid(f: &MdmFunction) -> Vec<ValueVector> {
    assert_eq!(f.arity(), 2);
    let axis = |i: usize| -> Vec<BigRational> {
        let vals: Vec<&BigRational> = f.values().iter().map(|v| &v.coords()[i]).collect();
        let lo = vals.iter().min().unwrap().to_owned().clone() - rational(1, 1);
        let hi = vals.iter().max().unwrap().to_owned().clone() + rational(1, 1);
        (0..5).map(|j| &lo + (&hi - &lo) * rational(j, 4)).collect()
    };
    let (xs, ys) = (axis(0), axis(1));
    xs.iter().flat_map(|x| ys.iter().map(move |y| ValueVector::new(vec![x.clone(), y.clone()]))).collect()
}

pub fn sublevel_monotone(f: &MdmFunction) -> Check {
    let pts = grid(f);
    let levels: Vec<CellSet> = pts.iter().map(|a| f.sublevel(a).unwrap()).collect();
    for (i, a) in pts.iter().enumerate() {
        ensure(f.complex().is_subcomplex(&levels[i]), || format!("K({a}) is not a subcomplex"))?;
        for (j, b) in pts.iter().enumerate() {
            if vec_leq(a, b).unwrap() {
                ensure(levels[i].is_subset(&levels[j]), || format!("K({a}) not inside K({b})"))?;
            }
        }
    }
    Ok(())
}

/// Performs up to `steps` random legal collapses and compares Betti numbers
/// after each; returns how many collapses were performed.
pub fn collapses_preserve_betti(seed: u64, steps: usize) -> std::result::Result<usize, String> {
    let mut r = rng(seed);
    let mut k: SimplicialComplex = (*random_complex(&mut r, 30)).clone();
    let want = betti(&k);
    let mut done = 0;
    while done < steps {
        let mut free: Vec<(usize, usize)> = (0..k.len())
            .filter(|&c| k.cofacets(c).len() == 1)
            .map(|c| (c, k.cofacets(c)[0]))
            .collect();
        if free.is_empty() {
            break;
        }
        free.shuffle(&mut r);
        let (a, b) = free[0];
        k = k.elementary_collapse(&k.simplex(a).clone(), &k.simplex(b).clone()).map_err(|e| e.to_string())?;
        done += 1;
        let mut got = betti(&k);
        got.resize(want.len(), 0);
        ensure(got == want, || format!("seed {seed}: {want:?} became {got:?} after {done} collapses"))?;
    }
    Ok(done)
}

pub fn boundary_vanishes(seed: u64) -> Check {
    let mut r = rng(seed);
    let k = random_complex(&mut r, 30);
    let mats = boundary_matrices(&k, &k.all(), &CellSet::new()).unwrap();
    ensure(boundary_squares_vanish(&mats), || format!("seed {seed}: boundary squared is nonzero"))
}

/// The four-piece split of K(b) and the sublevel collapse, at random a ⪇ b.
pub fn extended_and_collapse(seed: u64) -> Check {
    let mut r = rng(seed);
    let (v, f) = either_mdm(seed, &mut r);
    let pts = grid(&f);
    let a = pts.choose(&mut r).unwrap();
    let b = pts.choose(&mut r).unwrap();
    if !vec_lneq(a, b).unwrap() {
        return Ok(());
    }
    let d = extended_decomposition(&f, a, b).map_err(|e| format!("seed {seed}: {e}"))?;
    let failures = d.invariant_failures(&v);
    ensure(failures.is_empty(), || format!("seed {seed}: {failures:?}"))?;
    let k = f.complex();
    ensure(betti_of(k, &d.attached()).unwrap() == d.betti_after(k), || format!("seed {seed}: homology differs"))?;
    match collapse_sublevels(&f, a, b) {
        Ok(c) => {
            let end = c.sequence.replay(k, &c.k_b).map_err(|e| e.to_string())?;
            ensure(end == c.k_a, || format!("seed {seed}: collapse ends elsewhere"))?;
            ensure(d.betti_before(k) == d.betti_after(k), || format!("seed {seed}: collapsible but Betti changed"))
        }
        Err(Error::FixedPointOutside(_)) => Ok(()),
        Err(e) => Err(format!("seed {seed}: {e}")),
    }
}

pub fn components_consistent(seed: u64) -> Check {
    let mut r = rng(seed);
    let (_, f) = either_mdm(seed, &mut r);
    let flow = flow_of(&f.gradient().unwrap());
    let finest = flow.basic_sets();
    let comps = critical_components(&f).unwrap();
    let partition: Vec<Vec<usize>> =
        comps.classes.iter().map(|c| c.iter().map(|&x| finest.index_of(x).unwrap()).collect()).collect();
    match (flow.coarsen(&finest, &partition), component_decomposition(&f)) {
        (Ok(a), Ok(b)) => {
            ensure(a == b, || format!("seed {seed}: decompositions differ"))?;
            ensure(flow.is_morse_decomposition(&b), || format!("seed {seed}: not a Morse decomposition"))
        }
        (Err(Error::CycleDetected(_)), Err(Error::FCycle(_))) => Ok(()),
        (x, y) => Err(format!("seed {seed}: {x:?} vs {y:?}")),
    }
}

/// No simplex has both a lower cofacet and an upper facet.
pub fn trichotomy(f: &MdmFunction) -> Check {
    for c in 0..f.complex().len() {
        let (h, t) = (f.lower_cofacets(c).len(), f.upper_facets(c).len());
        ensure(!(h == 1 && t == 1), || format!("cell {c} is both a tail and a head"))?;
    }
    Ok(())
}
