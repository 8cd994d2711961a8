mod common;

use clusterfree::bits;
use clusterfree::*;
use common::*;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn finite(r: &SearchResult) -> u64 {
    r.value.finite().expect("finite value")
}

#[test]
fn f_matches_brute_force() {
    for (n, k, d, nu) in [(4, 2, 2, 0), (5, 2, 3, 0), (5, 2, 3, 1), (6, 2, 3, 1), (6, 2, 4, 1), (6, 3, 3, 1), (6, 3, 4, 0), (6, 2, 3, 2)] {
        let expect = brute_extremal(n, k, d, &|f| naive_matching(f) > nu as usize);
        let got = compute_f_exact(n, k, d, nu, &cfg()).unwrap();
        match expect {
            Some(v) => {
                assert_eq!(got.value, Value::Finite(v as u64), "f({n},{k},{d},{nu})");
                assert!(got.is_proven());
            }
            None => assert_eq!(got.status, Status::Infeasible, "f({n},{k},{d},{nu})"),
        }
    }
}

#[test]
fn g_matches_brute_force() {
    for (n, k, d, t) in [(4, 2, 2, 2), (5, 2, 3, 2), (6, 2, 3, 3), (5, 2, 4, 3), (6, 3, 3, 3), (6, 3, 4, 3), (6, 2, 4, 4)] {
        let expect = brute_extremal(n, k, d, &|f| !naive_t_wise_intersecting(f, t));
        let got = compute_g_exact(n, k, d, t, &cfg()).unwrap();
        match expect {
            Some(v) => assert_eq!(got.value, Value::Finite(v as u64), "g({n},{k},{d},{t})"),
            None => assert_eq!(got.status, Status::Infeasible, "g({n},{k},{d},{t})"),
        }
    }
}

#[test]
fn trivial_f_values() {
    for k in 1..=5 {
        assert_eq!(compute_f_exact(k, k, 3, 0, &cfg()).unwrap().value, Value::Finite(1));
    }
    assert_eq!(compute_f_exact(6, 2, 2, 1, &cfg()).unwrap().value, Value::Infeasible);
    assert!(compute_f_exact(6, 2, 1, 1, &cfg()).is_err());
    assert!(compute_g_exact(6, 2, 3, 1, &cfg()).is_err());
}

#[test]
fn f_is_monotone() {
    let f = |n, nu| compute_f_exact(n, 3, 3, nu, &cfg()).unwrap().value.finite().unwrap_or(0);
    for n in 6..=9 {
        assert!(f(n, 0) >= f(n, 1));
        assert!(f(n + 1, 1) >= f(n, 1));
    }
    assert!(f(9, 1) >= f(9, 2));
}

#[test]
fn f_reaches_the_star_plus_block_value() {
    // the disjoint union of a 3-set and a full star on the remaining six vertices
    let r = compute_f_exact(10, 3, 3, 1, &cfg()).unwrap();
    assert_eq!(r.value, Value::Finite(16));
    assert!(r.is_proven());
}

#[test]
fn g_with_pairs_equals_f_with_one() {
    for (n, k, d) in [(5, 2, 3), (6, 2, 3), (7, 2, 3), (7, 3, 3), (8, 3, 3), (9, 3, 3), (7, 3, 4), (8, 2, 4)] {
        let f = compute_f_exact(n, k, d, 1, &cfg()).unwrap();
        let g = compute_g_exact(n, k, d, 2, &cfg()).unwrap();
        assert_eq!((f.value, f.status), (g.value, g.status), "({n},{k},{d})");
    }
}

#[test]
fn witnesses_satisfy_the_constraints() {
    let r = compute_f_exact(8, 3, 3, 1, &cfg()).unwrap();
    let f = r.witness.as_ref().unwrap().as_family().unwrap();
    assert_eq!(f.len() as u64, finite(&r));
    let sets = to_sets(f.members());
    assert!(naive_cluster_free(&sets, 3, 3));
    assert!(naive_matching(&sets) >= 2);
    let r = compute_g_exact(7, 2, 3, 4, &cfg()).unwrap();
    let g = r.witness.as_ref().unwrap().as_family().unwrap();
    let sets = to_sets(g.members());
    assert!(naive_cluster_free(&sets, 2, 3));
    assert!(!naive_t_wise_intersecting(&sets, 4));
}

/// All simple r-graphs on [n] whose every v-set spans fewer than e edges.
fn brute_simple_turan(n: u32, r: u32, v: u32, e: u64) -> u64 {
    let edges = bits::k_subset_masks(n, r);
    let vsets = bits::k_subset_masks(n, v);
    (0u64..1 << edges.len())
        .filter(|sel| {
            vsets
                .iter()
                .all(|&s| (0..edges.len()).filter(|&i| sel >> i & 1 == 1 && edges[i] & !s == 0).count() < e as usize)
        })
        .map(|sel| u64::from(sel.count_ones()))
        .max()
        .unwrap()
}

#[test]
fn simple_turan_matches_brute_force() {
    for (n, r, v, e) in [(4, 2, 3, 3), (5, 2, 3, 3), (5, 2, 4, 4), (5, 2, 4, 5), (5, 3, 4, 2), (5, 3, 4, 3), (6, 3, 4, 2)] {
        let p = ForbiddenPattern::simple(v, e, r).unwrap();
        assert_eq!(finite(&turan_simple(n, &p, &cfg()).unwrap()), brute_simple_turan(n, r, v, e), "({n},{r},{v},{e})");
    }
}

#[test]
fn simple_never_beats_multigraph() {
    for (n, r, v, e) in [(5, 2, 3, 3), (5, 2, 4, 5), (5, 3, 4, 3), (6, 2, 3, 2)] {
        let s = turan_simple(n, &ForbiddenPattern::simple(v, e, r).unwrap(), &cfg()).unwrap();
        let m = turan_multigraph(n, &ForbiddenPattern::multigraph(v, e, r).unwrap(), &cfg()).unwrap();
        assert!(finite(&s) <= finite(&m));
    }
}

#[test]
fn pair_patterns_allow_e_minus_one_copies() {
    for n in 2..=6u32 {
        for e in 1..=4u64 {
            let r = turan_multigraph(n, &ForbiddenPattern::multigraph(2, e, 2).unwrap(), &cfg()).unwrap();
            assert_eq!(finite(&r), (e - 1) * bits::binom(i64::from(n), 2) as u64);
        }
    }
}

#[test]
fn tight_path_values() {
    for (n, r, expect) in [(8, 2, 4), (7, 3, 7), (3, 3, 1), (6, 3, 4), (9, 3, 12), (6, 4, 3)] {
        let res = turan_tight_path(n, r, 2, &cfg()).unwrap();
        assert_eq!(finite(&res), expect, "ex({n}, P_2^{r})");
        assert!(res.is_proven());
        assert!(u128::from(finite(&res)) * u128::from(r) <= bits::binom(i64::from(n), i64::from(r) - 1));
    }
    let fano = turan_tight_path(7, 3, 2, &cfg()).unwrap();
    assert!(is_design(fano.witness.unwrap().as_multigraph().unwrap(), &DesignParams { t: 2, lambda: 1 }).unwrap());
}

#[test]
fn results_do_not_depend_on_threads() {
    let runs = |threads: usize| {
        let c = SearchConfig::default().threads(threads);
        vec![
            compute_f_exact(9, 3, 3, 1, &c).unwrap(),
            compute_g_exact(7, 3, 4, 3, &c).unwrap(),
            turan_tight_path(9, 3, 2, &c).unwrap(),
            turan_multigraph(5, &ForbiddenPattern::multigraph(3, 3, 2).unwrap(), &c).unwrap(),
        ]
    };
    let one = runs(1);
    let four = runs(4);
    for (a, b) in one.iter().zip(&four) {
        assert_eq!(a.value, b.value);
        assert_eq!(a.status, b.status);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.stats.nodes, b.stats.nodes);
    }
}

#[test]
fn tiny_budget_reports_lower_bound() {
    let r = compute_f_exact(10, 3, 4, 1, &SearchConfig::with_budget(1_000)).unwrap();
    assert_eq!(r.status, Status::LowerBoundOnly);
    let f = r.witness.unwrap();
    let f = f.as_family().unwrap();
    assert!(is_d_cluster_free(f, 4));
    assert!(matching_number(f).unwrap().0 >= 2);
}

#[test]
fn density_sequences() {
    for (v, e, r, range) in [(2, 2, 2, 2..=6), (2, 3, 2, 2..=5), (3, 3, 2, 3..=6), (4, 2, 3, 4..=7)] {
        let p = ForbiddenPattern::multigraph(v, e, r).unwrap();
        let seq = density_sequence(&p, range, &cfg()).unwrap();
        for w in seq.points.windows(2) {
            assert!(w[1].ratio <= w[0].ratio + 1e-12);
        }
    }
}
