mod common;

use common::{affine_dynkin, quiver_edges, same_graph};
use kql_core::mckay::{character_table, framed_mckay_quiver, mckay_quiver, GroupSpec};

fn groups() -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (1..=6).map(GroupSpec::A).collect();
    out.extend([GroupSpec::D(4), GroupSpec::D(5), GroupSpec::D(6), GroupSpec::E6, GroupSpec::E7, GroupSpec::E8]);
    out
}

#[test]
fn underlying_graph_is_affine_dynkin() {
    for g in groups() {
        let q = mckay_quiver(&character_table(g).unwrap()).unwrap();
        let n = q.num_vertices();
        let edges = quiver_edges(&q);
        let (en, ee) = affine_dynkin(g);
        assert!(same_graph((n, &edges), (en, &ee)), "{g}: {:?}", q.multiplicity);
    }
}

#[test]
fn delta_is_in_the_kernel_of_the_cartan_matrix() {
    for g in groups() {
        let ct = character_table(g).unwrap();
        let q = mckay_quiver(&ct).unwrap();
        let delta: Vec<i64> = q.dims.iter().map(|&d| d as i64).collect();
        assert_eq!(delta[0], 1);
        for i in 0..delta.len() {
            let row: i64 =
                (0..delta.len()).map(|j| (2 * (i == j) as i64 - q.multiplicity[i][j] as i64) * delta[j]).sum();
            assert_eq!(row, 0, "{g} at vertex {i}");
        }
        assert_eq!(delta.iter().map(|d| d * d).sum::<i64>() as usize, ct.order);
    }
}

#[test]
fn framing_attaches_to_the_trivial_vertex() {
    for g in groups() {
        let f = framed_mckay_quiver(g, 2).unwrap();
        let framing: Vec<_> = f.arrows.iter().skip(f.base.arrows.len()).collect();
        assert_eq!(framing.len(), 4);
        for (k, a) in f.arrows.iter().enumerate() {
            assert_eq!(f.arrows[a.reverse].reverse, k);
            assert_eq!(a.epsilon, -f.arrows[a.reverse].epsilon);
            assert_eq!((a.head, a.tail), (f.arrows[a.reverse].tail, f.arrows[a.reverse].head));
        }
    }
}
