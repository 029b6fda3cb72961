use thurston::curves::spine::*;
use thurston::surface::*;
use thurston::words::same_cyclic;

fn check_spine(tri: &Triangulation, marked: &[usize]) {
    let sp = Spine::new(tri, marked);
    let n = marked.len();
    if n >= 3 {
        assert_eq!(sp.edge_count(), 3 * (n - 2), "marked {marked:?}");
        assert_eq!(sp.node_count(), 2 * (n - 2));
        for u in 0..sp.node_count() {
            assert_eq!(sp.rotation(u).len(), 3);
        }
    }
    let orbits = sp.face_orbits();
    assert_eq!(orbits.len(), n);
    for i in 0..n {
        let f = sp.face(i);
        assert!(
            orbits.iter().any(|o| same_cyclic(o, f)),
            "face {i} word {f:?} not an orbit of {orbits:?}"
        );
    }
    // Realizing a face and mapping it back is the identity.
    for i in 0..n {
        let walk = sp.realize_loop(sp.face(i));
        assert!(same_cyclic(&sp.dual_loop_to_word(&walk), sp.face(i)));
    }
}

#[test]
fn spine_faces_are_marked_points() {
    let o = octahedron();
    check_spine(&o, &[0, 5]);
    check_spine(&o, &[0, 1, 5]);
    check_spine(&o, &[1, 2, 3, 4]);
    check_spine(&o, &[0, 1, 2, 3, 4, 5]);
    let (r, _) = refine_barycentric(&o);
    check_spine(&r, &[0, 2, 4, 5]);
    check_spine(&r, &[0, 1, 2, 3, 4]);
    let (r2, _) = refine_barycentric(&tetrahedron());
    check_spine(&r2, &[0, 1, 2, 3]);
    check_spine(&r2, &[0, 1, 2, 3, 4, 10, 13]);
}
