mod common;

use common::{brute_force, theta_family, tiny_corpus, Fp};
use kql_core::pi_module::is_isomorphic;
use kql_core::stability::{concentrate, dimension_bound_check, is_semistable, is_stable, theta_zero_for};

#[test]
fn stability_matches_subrepresentation_search() {
    let corpus = tiny_corpus::<Fp>(2024, 540);
    let mut verdicts = [0usize; 3];
    for m in &corpus {
        for (name, t) in theta_family(m) {
            let expected = brute_force(m, &t);
            let got = (is_stable(m, &t).unwrap(), is_semistable(m, &t).unwrap());
            assert_eq!(got, expected, "{name} on {:?}", m);
            verdicts[usize::from(got.0) + usize::from(got.1)] += 1;
        }
    }
    // the corpus exercises unstable, strictly semistable and stable cases
    assert!(verdicts.iter().all(|&c| c > 20), "{verdicts:?}");
}

#[test]
fn concentrated_modules() {
    let mut seen = 0;
    for m in tiny_corpus::<Fp>(7, 300) {
        if !is_semistable(&m, &theta_zero_for(&m)).unwrap() {
            assert!(concentrate(&m).is_err());
            continue;
        }
        seen += 1;
        let c = concentrate(&m).unwrap();
        assert!(is_stable(&c, &theta_zero_for(&c)).unwrap());
        assert_eq!(c.dim.v[0], m.dim.v[0]);
        assert!(c.dim.le(&m.dim));
        assert!(dimension_bound_check(&c));
        let again = concentrate(&c).unwrap();
        assert!(is_isomorphic(&again, &c, 1));
        assert_eq!(again, c);
    }
    assert!(seen > 50, "{seen}");
}
