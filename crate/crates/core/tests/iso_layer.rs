use hamcubic::arith::gcd;
use hamcubic::families::{x_graph, XParams};
use hamcubic::iso::{
    canonical_form, cayley_params, find_k, find_k_via_cosets, fundamental_factor_counts,
    isomorphic_x, swap_form, swap_iso, swap_shift_formula, KWitness,
};
use hamcubic::oracle::brute_isomorphic;
use hamcubic::families::cayley_graph;

fn all_params(max_order: usize) -> Vec<XParams> {
    let mut out = Vec::new();
    for s in 1..=max_order {
        for t in 1..=max_order / s {
            for r in 0..s {
                out.push(XParams { s, t, r });
            }
        }
    }
    out
}

#[test]
fn k_witnesses_hold_for_both_routes() {
    let mut missing = 0;
    for s in 1..=20 {
        for t in 1..=12 {
            for r in 1..s {
                let p = XParams { s, t, r };
                match find_k(&p) {
                    Ok(kw) => {
                        assert!(KWitness::holds(s, t, r, kw.k), "{p}");
                        let k2 = find_k_via_cosets(&p).unwrap();
                        assert!(KWitness::holds(s, t, r, k2), "{p} coset route gave {k2}");
                    }
                    Err(_) => {
                        // Only possible when d1 > 1 shares a prime with t.
                        assert!(p.d1() > 1, "{p}");
                        assert!(find_k_via_cosets(&p).is_err());
                        missing += 1;
                    }
                }
            }
        }
    }
    assert!(find_k(&XParams { s: 8, t: 2, r: 4 }).is_err());
    assert!(missing > 0);
}

#[test]
fn swap_formula_matches_walk() {
    for s in 1..=14 {
        for t in 1..=8 {
            for r in 0..s {
                let p = XParams { s, t, r };
                let walked = swap_iso(&p);
                assert!(walked.verify(), "{p}");
                assert_eq!(swap_form(&p), walked.to, "{p}");
                let g = gcd(s, r);
                if r != 0 && find_k(&p).is_ok() {
                    let f = swap_shift_formula(&p).expect("inverse exists");
                    let s2 = s * t / g;
                    assert!(f % s2 == walked.to.r || (s2 - f % s2) % s2 == walked.to.r, "{p}");
                }
            }
        }
    }
}

#[test]
fn cayley_representation_is_adjacency_preserving() {
    for p in all_params(60).into_iter().step_by(7) {
        let rep = cayley_params(&p).unwrap();
        let c = cayley_graph(&rep.params);
        let x = x_graph(&p).graph;
        for e in 0..c.edge_count() {
            let [a, b] = c.endpoints(e);
            assert_eq!(
                c.multiplicity(a, b),
                x.multiplicity(rep.to_grid[a], rep.to_grid[b]),
                "{p}"
            );
        }
    }
}

#[test]
fn factor_counts_match_decomposition() {
    for s in 1..=10 {
        for t in 1..=6 {
            for r in 0..s {
                let p = XParams { s, t, r };
                let x = x_graph(&p);
                let c = fundamental_factor_counts(&p);
                let red = x.graph.cycle_decomposition(&x.subset_where(|k| k == hamcubic::families::XEdgeKind::Horizontal)).unwrap();
                let blue = x.graph.cycle_decomposition(&x.subset_where(|k| k != hamcubic::families::XEdgeKind::Horizontal)).unwrap();
                assert_eq!(red.len(), c.red_cycles);
                assert!(red.iter().all(|cy| cy.len() == c.red_length));
                assert_eq!(blue.len(), c.blue_cycles);
                assert!(blue.iter().all(|cy| cy.len() == c.blue_length));
            }
        }
    }
}

#[test]
fn isomorphism_predicate_matches_brute_force() {
    for order in 1..=24 {
        let params: Vec<XParams> = all_params(order).into_iter().filter(|p| p.order() == order).collect();
        let graphs: Vec<_> = params.iter().map(|p| x_graph(p).graph).collect();
        // Brute-force classes via representatives.
        let mut reps: Vec<usize> = Vec::new();
        let mut class = vec![0; params.len()];
        for i in 0..params.len() {
            let found = reps.iter().position(|&r| {
                brute_isomorphic(&graphs[r], &graphs[i]).unwrap().bijection.is_some()
            });
            class[i] = match found {
                Some(c) => c,
                None => {
                    reps.push(i);
                    reps.len() - 1
                }
            };
        }
        for i in 0..params.len() {
            for j in 0..params.len() {
                let expect = class[i] == class[j];
                assert_eq!(isomorphic_x(&params[i], &params[j]), expect, "{} vs {}", params[i], params[j]);
                assert_eq!(canonical_form(&params[i]) == canonical_form(&params[j]), expect);
            }
        }
    }
}
