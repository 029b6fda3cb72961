use num_rational::Ratio;
use thurston::cover::models::*;
use thurston::cover::*;
use thurston::curves::*;
use thurston::surface::*;

fn z2() -> PLThurstonMap {
    power_map(3, 2, &[0, 2, 4], vec![0, 1]).unwrap()
}

fn lattes2() -> PLThurstonMap {
    let z = Ratio::from_integer(0);
    lattes(4, [[2, 0], [0, 2]], (z, z), &[]).unwrap()
}

fn riemann_hurwitz(f: &PLThurstonMap) {
    let s: usize = (0..f.domain().vertex_count()).map(|y| f.local_degree(y) - 1).sum();
    assert_eq!(s, 2 * f.degree() - 2);
    for v in 0..f.codomain().vertex_count() {
        let fiber: usize = (0..f.domain().vertex_count())
            .filter(|&y| f.vertex_image()[y] == v)
            .map(|y| f.local_degree(y))
            .sum();
        assert_eq!(fiber, f.degree());
    }
}

#[test]
fn z2_model() {
    let f = z2();
    assert_eq!(f.degree(), 2);
    assert_eq!(f.critical_points(), vec![0, 1]);
    assert_eq!(f.local_degree(0), 2);
    assert_eq!(f.local_degree(2), 1);
    assert_eq!(f.postcritical_set().unwrap(), vec![0, 1]);
    let o = f.orbifold_data();
    assert_eq!(o.signature, vec![Weight::Infinite, Weight::Infinite]);
    assert_eq!(o.euler, Ratio::from_integer(0));
    assert_eq!(o.kind, OrbifoldKind::Parabolic(1));
    assert!(f.is_topological_polynomial());
    riemann_hurwitz(&f);
}

#[test]
fn z3_model() {
    let f = power_map(3, 3, &[0, 3, 6], vec![0, 1, 2]).unwrap();
    assert_eq!(f.degree(), 3);
    assert_eq!(f.local_degree(1), 3);
    riemann_hurwitz(&f);
    assert_eq!(f.orbifold_data().kind, OrbifoldKind::Parabolic(1));
}

#[test]
fn lattes_model() {
    let f = lattes2();
    assert_eq!(f.degree(), 4);
    assert_eq!(f.postcritical().len(), 4);
    assert_eq!(f.postcritical(), {
        let mut m = f.marked().to_vec();
        m.sort();
        m
    });
    let o = f.orbifold_data();
    assert_eq!(o.signature, vec![Weight::Finite(2); 4]);
    assert_eq!(o.euler, Ratio::from_integer(0));
    assert_eq!(o.kind, OrbifoldKind::Parabolic(6));
    assert!(!f.is_topological_polynomial());
    riemann_hurwitz(&f);
}

#[test]
fn lattes_one_plus_i() {
    let z = Ratio::from_integer(0);
    let f = lattes(4, [[1, -1], [1, 1]], (z, z), &[]).unwrap();
    assert_eq!(f.degree(), 2);
    riemann_hurwitz(&f);
    assert_eq!(f.orbifold_data().kind, OrbifoldKind::Parabolic(6));
}

#[test]
fn basilica_model() {
    let f = basilica(false).unwrap();
    assert_eq!(f.degree(), 2);
    let o = f.orbifold_data();
    assert_eq!(o.signature, vec![Weight::Infinite; 3]);
    assert_eq!(o.euler, Ratio::from_integer(-1));
    assert_eq!(o.kind, OrbifoldKind::Hyperbolic);
    assert!(f.is_topological_polynomial());
    riemann_hurwitz(&f);
    let g = basilica(true).unwrap();
    assert_eq!(g.dynamics(), &[0, 2, 1, 3]);
}

#[test]
fn degree_one_is_not_a_cover() {
    let o = octahedron();
    let sphere = MarkedSphere::new(o.clone(), vec![0, 5]).unwrap();
    let id: Vec<usize> = (0..6).collect();
    let e = PLThurstonMap::new(sphere, o, id.clone(), (0..8).collect(), id).unwrap_err();
    assert!(matches!(e, CoverError::NotACover(_)), "{e:?}");
}

#[test]
fn reflection_is_orientation_reversing() {
    let o = octahedron();
    let sphere = MarkedSphere::new(o.clone(), vec![0, 5]).unwrap();
    // Swap the poles: every triangle flips.
    let img = vec![5, 1, 2, 3, 4, 0];
    let e = PLThurstonMap::new(sphere, o, img, (0..8).collect(), (0..6).collect()).unwrap_err();
    assert!(matches!(e, CoverError::OrientationReversed(_)), "{e:?}");
}

#[test]
fn unmarked_image_is_rejected() {
    // p1 is marked and maps to the unmarked p2.
    let e = power_map(3, 2, &[0, 2, 4], vec![0, 1, 3]).unwrap_err();
    assert!(matches!(e, CoverError::MarkedSetNotInvariant(_)), "{e:?}");
}

#[test]
fn pullback_of_peripheral_curve() {
    let f = z2();
    let sp = f.spine();
    let around_n = curve_from_word(sp, sp.face(0));
    let pb = f.pullback_curve(&around_n);
    assert_eq!(pb.len(), 1);
    assert_eq!(pb[0].1, 2);
    assert_eq!(pb[0].0, around_n);
}

#[test]
fn pullback_of_unbranched_disk() {
    // Levy example: the curve around the two fixed equator points.
    let f = power_map(3, 2, &[0, 1, 3], vec![0, 1, 2, 3]).unwrap();
    let sp = f.spine();
    let cs = enumerate_curves(sp, 6);
    let g = cs
        .iter()
        .find(|c| small_side(sp, c) == vec![2, 3] || small_side(sp, c) == vec![0, 1])
        .expect("curve around p0, p1");
    let pb = f.pullback_curve(g);
    assert_eq!(pb.iter().map(|p| p.1).sum::<usize>(), 2);
    assert!(pb.iter().all(|p| p.1 == 1));
    assert!(pb.iter().any(|p| &p.0 == g));
    for c in &cs {
        let s: usize = f.pullback_curve(c).iter().map(|p| p.1).sum();
        assert_eq!(s, f.degree());
    }
}

#[test]
fn lift_triangulation_doubles() {
    let f = z2();
    let (lifted, g) = lift_subdivision(&f, &Subdivision::trivial(f.codomain())).unwrap();
    assert_eq!(lifted.fine.triangle_count(), 2 * f.codomain().triangle_count());
    assert_eq!(euler_characteristic(&lifted.fine), 2);
    assert_eq!(g.len(), lifted.fine.vertex_count());
}

#[test]
fn iterates() {
    for f in [z2(), basilica(true).unwrap(), lattes2()] {
        assert_eq!(f.iterate(1).unwrap().degree(), f.degree());
        let f2 = f.iterate(2).unwrap();
        assert_eq!(f2.degree(), f.degree() * f.degree());
        assert_eq!(f2.postcritical(), f.postcritical());
        riemann_hurwitz(&f2);
        for (i, &j) in f.dynamics().iter().enumerate() {
            assert_eq!(f2.dynamics()[i], f.dynamics()[j]);
        }
    }
    let f3 = z2().iterate(3).unwrap();
    assert_eq!(f3.degree(), 8);
}
