use proptest::prelude::*;
use thurston::surface::*;

#[test]
fn tetrahedron_and_octahedron_are_spheres() {
    let t = tetrahedron();
    assert_eq!(euler_characteristic(&t), 2);
    assert_eq!((t.vertex_count(), t.edge_count(), t.triangle_count()), (4, 6, 4));
    let o = octahedron();
    assert_eq!(o.triangle_count(), 8);
    assert_eq!(euler_characteristic(&o), 2);
}

#[test]
fn missing_face_is_wrong_euler() {
    let e = build_triangulation(&[[0, 1, 2], [0, 2, 3], [0, 3, 1]]).unwrap_err();
    assert_eq!(e, SurfaceError::WrongEuler(1));
}

#[test]
fn unused_vertex_is_disconnected() {
    let e = build_triangulation(&[[0, 1, 2], [0, 2, 4], [0, 4, 1], [1, 4, 2]]).unwrap_err();
    assert!(matches!(e, SurfaceError::Disconnected(_)));
}

#[test]
fn two_disjoint_tetrahedra_are_disconnected() {
    let mut t = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
    t.extend(t.clone().iter().map(|x| x.map(|v| v + 4)));
    assert!(matches!(build_triangulation(&t), Err(SurfaceError::Disconnected(_))));
}

#[test]
fn doubled_triangle_is_non_manifold() {
    // Two copies of one triangle have chi = 2 but a repeated face.
    let d = build_triangulation(&[[0, 1, 2], [0, 2, 1]]).unwrap_err();
    assert!(matches!(d, SurfaceError::NonManifold(_)), "{d:?}");
}

#[test]
fn orientation_is_normalized() {
    // Flip two faces of the tetrahedron; the result must still be coherent.
    let t = build_triangulation(&[[0, 2, 1], [0, 2, 3], [0, 1, 3], [1, 3, 2]]).unwrap();
    for &[a, b, _] in t.triangles() {
        assert!(t.triangle_left_of(b, a).is_some());
    }
    assert_eq!(t.triangles()[0], [0, 2, 1]);
}

#[test]
fn stars_and_links_are_cycles() {
    let o = octahedron();
    for v in 0..o.vertex_count() {
        assert_eq!(o.degree(v), 4);
        let l = o.link(v);
        for i in 0..l.len() {
            let (x, y) = (l[i], l[(i + 1) % l.len()]);
            let t = o.triangle_left_of(v, x).unwrap();
            assert_eq!(o.apex(t, v, x), y);
        }
    }
}

#[test]
fn barycentric_counts() {
    let (r, map) = refine_barycentric(&tetrahedron());
    assert_eq!(r.vertex_count(), 14);
    assert_eq!(r.triangle_count(), 24);
    assert_eq!(euler_characteristic(&r), 2);
    assert_eq!(map, vec![0, 1, 2, 3]);
    let (r2, _) = refine_barycentric(&r);
    assert_eq!(r2.triangle_count(), 144);
    assert!(build_triangulation(r2.triangles()).is_ok());
}

#[test]
fn marked_sphere_rejects_repeats() {
    assert!(MarkedSphere::new(tetrahedron(), vec![0, 0]).is_err());
    assert!(MarkedSphere::new(tetrahedron(), vec![0, 9]).is_err());
    assert!(MarkedSphere::new(tetrahedron(), vec![0, 3]).is_ok());
}

fn random_sphere(splits: Vec<(usize, u8)>) -> Triangulation {
    // Grow a sphere from the tetrahedron by stellar subdivision of faces.
    let mut tris = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
    let mut n = 4;
    for (i, _) in splits {
        let k = i % tris.len();
        let [a, b, c] = tris.swap_remove(k);
        tris.extend([[a, b, n], [b, c, n], [c, a, n]]);
        n += 1;
    }
    build_triangulation(&tris).unwrap()
}

proptest! {
    #[test]
    fn refinement_preserves_euler(splits in prop::collection::vec((0usize..100, 0u8..1), 0..12)) {
        let t = random_sphere(splits);
        let (r, map) = refine_barycentric(&t);
        prop_assert_eq!(euler_characteristic(&r), 2);
        prop_assert_eq!(r.vertex_count(), t.vertex_count() + t.edge_count() + t.triangle_count());
        prop_assert_eq!(r.triangle_count(), 6 * t.triangle_count());
        let distinct: std::collections::BTreeSet<_> = map.iter().collect();
        prop_assert_eq!(distinct.len(), map.len());
        for v in 0..r.vertex_count() {
            let l = r.link(v);
            let set: std::collections::BTreeSet<_> = l.iter().collect();
            prop_assert_eq!(set.len(), l.len());
        }
    }
}
