mod common;

use std::collections::BTreeSet;

use common::*;
use mdmorse::complex::CellSet;
use mdmorse::dynamics::{flow_of, MorseDecomposition};
use mdmorse::field::Role;
use mdmorse::homology::conley_index;
use mdmorse::io::parse_partition;
use mdmorse::Error;

#[test]
fn flow_successors_match_role_rules_on_fixtures() {
    for name in FIELD_FIXTURES {
        let v = field(name);
        let flow = flow_of(&v);
        let oracle = oracle_successors(&v);
        assert_eq!(oracle.len(), v.complex().len());
        for (c, want) in oracle.iter().enumerate() {
            let got: BTreeSet<_> = flow.successors(c).iter().copied().collect();
            assert_eq!(&got, want, "{name} cell {c}");
        }
    }
}

#[test]
fn connects_matches_dfs_on_fixtures() {
    for name in FIELD_FIXTURES {
        let v = field(name);
        let flow = flow_of(&v);
        let succ = oracle_successors(&v);
        for x in 0..succ.len() {
            let reach = oracle_reach(&succ, x);
            for y in 0..succ.len() {
                assert_eq!(flow.connects(x, y), reach.contains(&y), "{name}: {x} -> {y}");
            }
        }
    }
}

#[test]
fn adapted_solution_connects_edge_to_edge_and_vertex() {
    let b = bundle("triangle_one_fixed_vertex.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let id = |t: &str| *cells(&b, t).first().unwrap();
    assert!(flow.connects(id("A B"), id("A E")));
    assert!(flow.connects(id("A B"), id("E")));
    assert!(!flow.connects(id("A"), id("A B")));
}

#[test]
fn face_connection_lemmas_on_fixtures() {
    for name in FIELD_FIXTURES {
        let v = field(name);
        let k = v.complex().clone();
        let flow = flow_of(&v);
        for s in 0..k.len() {
            for a in k.faces(s) {
                if a != s && !flow.connects(s, a) {
                    assert_eq!(v.role(s), Role::Head(a), "{name}");
                }
            }
            for t in 0..k.len() {
                if !flow.connects(s, t) {
                    continue;
                }
                // connects is strict, so the coface or face equal to an endpoint is skipped
                for &beta in k.cofacets(s).iter().filter(|&&b| b != t) {
                    assert!(flow.connects(beta, t), "{name}");
                }
                for alpha in k.faces(t).into_iter().filter(|&a| a != s) {
                    assert!(flow.connects(s, alpha), "{name}");
                }
            }
        }
    }
}

#[test]
fn square_sets_invariance_and_isolation() {
    let b = bundle("square_two_triangles.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let red = set_fixture(&b, "square_not_invariant.set");
    let orange = set_fixture(&b, "square_invariant_not_isolated.set");
    let blue = set_fixture(&b, "square_closed_exit_not_isolated.set");
    let green = set_fixture(&b, "square_isolated.set");
    assert!(!flow.is_invariant(&red));
    assert!(flow.is_invariant(&orange) && !flow.is_isolated_invariant(&orange));
    assert!(!b.complex.is_subcomplex(&b.complex.exit_set(&orange)));
    assert!(flow.is_invariant(&blue) && !flow.is_isolated_invariant(&blue));
    assert!(b.complex.is_subcomplex(&b.complex.exit_set(&blue)));
    assert!(flow.isolation_failure(&blue).is_some());
    assert!(flow.is_isolated_invariant(&green));
    assert!(flow.isolation_failure(&green).is_none());
}

#[test]
fn invariant_part_is_largest_invariant_subset() {
    let b = bundle("square_two_triangles.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let all = b.complex.all();
    // brute force over all subsets of the 11 cells
    let n = b.complex.len();
    for name in ["square_not_invariant.set", "square_isolated.set"] {
        let a = set_fixture(&b, name);
        let inv = flow.invariant_part(&a);
        assert!(flow.is_invariant(&inv));
        let mut best = CellSet::new();
        for mask in 0u32..(1 << n) {
            let s: CellSet = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if s.is_subset(&a) && flow.is_invariant(&s) {
                best.extend(s);
            }
        }
        assert_eq!(inv, best, "{name}");
    }
    // AB has no predecessor, so no backward solution passes through it
    assert!(!flow.is_invariant(&all));
}

#[test]
fn hexagon_basic_sets() {
    let b = bundle("hexagon_disk.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let m = flow.basic_sets();
    let mut sizes: Vec<usize> = m.sets.iter().map(|s| s.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1, 1, 1, 1, 1, 1, 6]);
    let cycle = cells(&b, "F\nF G\nG\nG J\nJ\nF J\n");
    assert!(m.sets.contains(&cycle));
    assert!(flow.is_morse_decomposition(&m));
    assert_eq!(flow.chain_recurrent_set(), m.sets.iter().flatten().copied().collect());
}

/// Basic-set index of each drawn label 1..=8, resolved by content.
fn hexagon_labels(b: &mdmorse::cli::InputBundle, m: &MorseDecomposition) -> Vec<usize> {
    ["D", "F\nF G\nG\nG J\nJ\nF J", "D E", "H I", "B C", "A D E", "B E F", "F G J"]
        .iter()
        .map(|t| m.sets.iter().position(|s| *s == cells(b, t)).unwrap())
        .collect()
}

#[test]
fn hexagon_order_matches_drawn_hasse_diagram() {
    let b = bundle("hexagon_disk.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let m = flow.basic_sets();
    let l = hexagon_labels(&b, &m);
    let drawn = [(3, 1), (4, 1), (5, 1), (4, 2), (5, 2), (8, 2), (6, 3), (7, 3), (7, 4), (7, 5)];
    let expected = MorseDecomposition::new(m.sets.clone(), drawn.iter().map(|&(u, lo)| (l[lo - 1], l[u - 1])));
    assert_eq!(m.flows_to(), expected.flows_to());
    let mut hasse = m.hasse();
    hasse.sort();
    let mut want: Vec<_> = drawn.iter().map(|&(u, lo)| (l[u - 1], l[lo - 1])).collect();
    want.sort();
    assert_eq!(hasse, want);
}

#[test]
fn hexagon_partition_fixtures_use_drawn_blocks() {
    let b = bundle("hexagon_disk.field");
    let m = flow_of(b.field.as_ref().unwrap()).basic_sets();
    let l = hexagon_labels(&b, &m);
    let as_sets = |blocks: Vec<Vec<usize>>| -> BTreeSet<BTreeSet<usize>> {
        blocks.into_iter().map(|bl| bl.into_iter().collect()).collect()
    };
    let fig = |blocks: &[&[usize]]| -> BTreeSet<BTreeSet<usize>> {
        blocks.iter().map(|bl| bl.iter().map(|&i| l[i - 1]).collect()).collect()
    };
    let cyclic = parse_partition(&fixture("hexagon_cyclic_blocks.part")).unwrap();
    assert_eq!(as_sets(cyclic), fig(&[&[1, 3, 4, 6], &[2, 5, 8], &[7]]));
    let ordered = parse_partition(&fixture("hexagon_ordered_blocks.part")).unwrap();
    assert_eq!(as_sets(ordered), fig(&[&[1, 3, 6], &[2, 8], &[4], &[5, 7]]));
}

#[test]
fn coarsening_detects_cycles_and_accepts_ordered_blocks() {
    let b = bundle("hexagon_disk.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let m = flow.basic_sets();
    let cyclic = parse_partition(&fixture("hexagon_cyclic_blocks.part")).unwrap();
    match flow.coarsen(&m, &cyclic) {
        Err(Error::CycleDetected(w)) => assert_eq!(w.len(), 2),
        other => panic!("expected a cycle, got {other:?}"),
    }
    let ordered = parse_partition(&fixture("hexagon_ordered_blocks.part")).unwrap();
    let c = flow.coarsen(&m, &ordered).unwrap();
    assert_eq!(c.len(), 4);
    assert!(flow.is_morse_decomposition(&c));
    for (i, block) in ordered.iter().enumerate() {
        assert_eq!(c.sets[i], flow.morse_set(&m, block));
    }
}

#[test]
fn bad_partitions_are_rejected() {
    let b = bundle("hexagon_disk.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let m = flow.basic_sets();
    let missing = vec![vec![0, 1, 2, 3, 4, 5, 6]];
    assert!(matches!(flow.coarsen(&m, &missing), Err(Error::InvalidPartition(_))));
    let repeated = vec![vec![0, 1, 2, 3], vec![3, 4, 5, 6, 7]];
    assert!(matches!(flow.coarsen(&m, &repeated), Err(Error::InvalidPartition(_))));
}

#[test]
fn connecting_set_between_basic_sets() {
    let b = bundle("hexagon_disk.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    let (de, d) = (cells(&b, "D E"), cells(&b, "D"));
    let c = flow.connecting_set(&de, &d).unwrap();
    assert_eq!(c, cells(&b, "D E\nE\nA E\nA\nA D\nD"));
    assert!(matches!(flow.connecting_set(&cells(&b, "A"), &d), Err(Error::NotInvariant)));
}

#[test]
fn basic_sets_are_isolated_with_expected_indices() {
    let b = bundle("hexagon_disk.field");
    let flow = flow_of(b.field.as_ref().unwrap());
    for s in &flow.basic_sets().sets {
        assert!(flow.is_isolated_invariant(s));
        let index = conley_index(&flow, s).unwrap();
        if s.len() == 1 {
            let c = *s.first().unwrap();
            let mut want = vec![0; 3];
            want[b.complex.dim_of(c)] = 1;
            assert_eq!(index, want);
        } else {
            assert_eq!(index, vec![1, 1, 0]);
        }
    }
}

#[test]
fn gradient_like_field_has_only_singleton_basic_sets() {
    let v = field("full_triangle.field");
    let flow = flow_of(&v);
    assert!(flow.is_acyclic());
    let m = flow.basic_sets();
    assert_eq!(m.sets.iter().flatten().copied().collect::<Vec<_>>(), v.fixed());
}
