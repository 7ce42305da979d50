//! End-to-end: grid witnesses lift to Hamiltonian cycles of the cubic split.

use hamcubic::constructive::{construct_witness, is_absent, Method};
use hamcubic::euler::{check_admissible, good_tour, lift_tour};
use hamcubic::families::{sgi_graph, x_graph, CubicEdgeKind, XParams};
use hamcubic::oracle::{brute_hamiltonian, verify_cycle};
use hamcubic::quotient::{classify_transitions, contract_factor};

#[test]
fn witnesses_lift_through_sgi() {
    let mut lifted = 0;
    for s in 1..=12 {
        for t in 1..=36 / s {
            for r in 0..s {
                let p = XParams::new(s, t, r).unwrap();
                let con = construct_witness(&p).unwrap();
                assert_eq!(con.is_none(), is_absent(&p), "{p}");
                let l = sgi_graph(&p);
                let c = contract_factor(&l.graph, &l.subset_of(CubicEdgeKind::Spoke)).unwrap();
                assert_eq!(c.quotient.edges(), x_graph(&p).graph.edges(), "{p}");
                match con {
                    Some(con) => {
                        con.witness.check().unwrap();
                        let ts = classify_transitions(&c);
                        let w = check_admissible(&c.quotient, &ts, &con.witness.edges).unwrap();
                        let tour = good_tour(&c.quotient, &ts, &w).unwrap();
                        let cycle = lift_tour(&c, &w, &tour).unwrap();
                        assert!(verify_cycle(&l.graph, &cycle), "{p}");
                        lifted += 1;
                    }
                    None if p.order() <= 12 => {
                        assert!(brute_hamiltonian(&l.graph).unwrap().cycle.is_none(), "{p}");
                    }
                    None => {}
                }
            }
        }
    }
    assert!(lifted > 200);
}

#[test]
fn large_grids_are_constructed() {
    for (s, t, r) in [(40, 12, 7), (60, 5, 11), (33, 9, 0), (64, 8, 3)] {
        let p = XParams::new(s, t, r).unwrap();
        let con = construct_witness(&p).unwrap().unwrap();
        assert_ne!(con.provenance.method, Method::ExactSearch, "{p}");
        con.witness.check().unwrap();
    }
}
