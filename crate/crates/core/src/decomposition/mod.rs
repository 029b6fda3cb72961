//! Decomposition of a map along an invariant multicurve, Hurwitz data,
//! twist lattices and the equivalence decider.

pub mod decide;
pub mod monodromy;
pub mod twist;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cover::PLThurstonMap;
use crate::curves::spine::Spine;
use crate::curves::{intersection_number, sides, Curve, MappingClassWord};
use crate::obstruction::{is_stable, thurston_matrix, ThurstonMatrix};
use crate::surface::{build_triangulation, MarkedSphere};

/// A complementary region of a multicurve, recorded by the marked points it
/// contains and the curves bounding it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThickPart {
    /// Marked indices in the region.
    pub marked: Vec<usize>,
    /// Indices into the multicurve of the boundary curves.
    pub boundary: Vec<usize>,
}

impl ThickPart {
    /// Punctures after capping each boundary curve with a punctured disk.
    pub fn punctures(&self) -> usize {
        self.marked.len() + self.boundary.len()
    }
}

/// Complementary regions of pairwise disjoint, non-homotopic essential
/// curves.
///
/// Region 0 contains marked index 0; region `j + 1` is the region just
/// inside `curves[j]`, on the side away from marked index 0.
pub fn thick_parts(sp: &Spine, curves: &[Curve]) -> Vec<ThickPart> {
    let inner: Vec<Vec<usize>> = curves.iter().map(|c| sides(sp, c).1).collect();
    let contains = |big: &[usize], small: &[usize]| {
        big.len() > small.len() && small.iter().all(|x| big.contains(x))
    };
    // Parent region of each curve: the smallest inner side strictly
    // containing it, else the root.
    let parent: Vec<usize> = (0..curves.len())
        .map(|j| {
            (0..curves.len())
                .filter(|&k| contains(&inner[k], &inner[j]))
                .min_by_key(|&k| inner[k].len())
                .map_or(0, |k| k + 1)
        })
        .collect();
    let mut parts = vec![
        ThickPart {
            marked: Vec::new(),
            boundary: Vec::new()
        };
        curves.len() + 1
    ];
    for (j, &p) in parent.iter().enumerate() {
        parts[p].boundary.push(j);
        parts[j + 1].boundary.push(j);
    }
    for i in 0..sp.marked().len() {
        let r = (0..curves.len())
            .filter(|&k| inner[k].contains(&i))
            .min_by_key(|&k| inner[k].len())
            .map_or(0, |k| k + 1);
        parts[r].marked.push(i);
    }
    for p in &mut parts {
        p.boundary.sort_unstable();
    }
    parts
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("not a multicurve: {0}")]
    BadMulticurve(String),
    #[error("multicurve is not stable")]
    NotStable,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// How a preimage component sits relative to the marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentClass {
    /// Homotopic to the multicurve element with this index.
    Essential(usize),
    /// Bounds a disk holding only this marked index.
    Peripheral(usize),
    /// Bounds a disk without marked points.
    Trivial,
}

/// A component of the preimage of the multicurve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageComponent {
    /// Index of the image curve.
    pub image: usize,
    pub degree: usize,
    pub class: ComponentClass,
    /// Domain vertices on its inner side: away from marked index 0 for an
    /// essential component, the disk side otherwise.
    pub inside: BTreeSet<usize>,
}

/// A map together with a stable multicurve in which the preimage
/// components of each curve are sorted into parallel bundles.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub map: PLThurstonMap,
    pub curves: Vec<Curve>,
    pub matrix: ThurstonMatrix,
    /// Conjugacy from the input map; always the identity here.
    pub witness: MappingClassWord,
    pub preimages: Vec<PreimageComponent>,
    pub parts: Vec<ThickPart>,
    /// Codomain vertices on the inner side of each curve.
    pub inner_vertices: Vec<BTreeSet<usize>>,
}

/// Put `f` in standard form with respect to `curves`.
///
/// The map is left as it is; the form is checked up to isotopy: the curves
/// must be disjoint, distinct, essential and stable, every curve must have
/// a homotopic preimage, and parallel preimages must be separated by
/// vertices so that their nesting is determined.
pub fn standard_form(f: &PLThurstonMap, curves: &[Curve]) -> Result<StandardForm, DecompositionError> {
    if f.is_twisted() {
        return Err(DecompositionError::Unsupported("twisted map".into()));
    }
    let sp = f.spine();
    for (i, a) in curves.iter().enumerate() {
        if !a.is_essential() {
            return Err(DecompositionError::BadMulticurve(format!("curve {i} is not essential")));
        }
        for (j, b) in curves.iter().enumerate().skip(i + 1) {
            if a == b {
                return Err(DecompositionError::BadMulticurve(format!("curves {i} and {j} coincide")));
            }
            if intersection_number(sp, a, b) != 0 {
                return Err(DecompositionError::BadMulticurve(format!("curves {i} and {j} intersect")));
            }
        }
    }
    if !is_stable(f, curves) {
        return Err(DecompositionError::NotStable);
    }
    let marked: Vec<usize> = f.marked().iter().map(|&q| f.embed()[q]).collect();
    let n = marked.len();
    let mut preimages = Vec::new();
    let mut inner_vertices = Vec::new();
    for (k, g) in curves.iter().enumerate() {
        let lift = f.lift_curve(g);
        inner_vertices.push(set_of(&lift.target_sides, true));
        for comp in lift.components {
            let away: Vec<usize> = (0..n).filter(|&i| comp.sides[marked[i]]).collect();
            let (class, inside) = if away.is_empty() {
                // Both sides hold a disk; take the one without marked points.
                (ComponentClass::Trivial, set_of(&comp.sides, true))
            } else if away.len() == 1 {
                (ComponentClass::Peripheral(away[0]), set_of(&comp.sides, true))
            } else if away.len() == n - 1 {
                (ComponentClass::Peripheral(0), set_of(&comp.sides, false))
            } else {
                let j = curves.iter().position(|c| *c == comp.curve).ok_or(DecompositionError::NotStable)?;
                if sides(sp, &curves[j]).1 != away {
                    return Err(DecompositionError::Unsupported(format!(
                        "preimage of curve {k} splits the marked points unlike curve {j}"
                    )));
                }
                (ComponentClass::Essential(j), set_of(&comp.sides, true))
            };
            preimages.push(PreimageComponent {
                image: k,
                degree: comp.degree,
                class,
                inside,
            });
        }
    }
    for j in 0..curves.len() {
        if !preimages.iter().any(|c| c.class == ComponentClass::Essential(j)) {
            return Err(DecompositionError::Unsupported(format!(
                "curve {j} has no homotopic preimage"
            )));
        }
    }
    // Components with nested disks or parallel components must be
    // separated by at least one vertex.
    for (i, a) in preimages.iter().enumerate() {
        for b in &preimages[i + 1..] {
            let comparable = a.class == b.class || a.class == ComponentClass::Trivial || b.class == ComponentClass::Trivial;
            if comparable && a.inside == b.inside {
                return Err(DecompositionError::Unsupported(
                    "parallel preimage components are not separated by a vertex".into(),
                ));
            }
        }
        if a.class == ComponentClass::Trivial && a.inside.is_empty() {
            return Err(DecompositionError::Unsupported("trivial preimage disk has no vertex".into()));
        }
    }
    Ok(StandardForm {
        map: f.clone(),
        curves: curves.to_vec(),
        matrix: thurston_matrix(f, curves),
        witness: MappingClassWord::identity(),
        preimages,
        parts: thick_parts(sp, curves),
        inner_vertices,
    })
}

fn set_of(sides: &[bool], value: bool) -> BTreeSet<usize> {
    (0..sides.len()).filter(|&v| sides[v] == value).collect()
}

/// A puncture of a patched sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Puncture {
    Marked(usize),
    /// The cap glued into the hole along this curve.
    Cap(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PunctureImage {
    pub from: Puncture,
    pub to: Puncture,
    pub degree: usize,
}

/// A thick part with each hole capped by a punctured disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchedSphere {
    pub part: usize,
    /// Punctures in the order of the marked vertices of `sphere`.
    pub punctures: Vec<Puncture>,
    /// Local degree of the map at each cap, by curve index.
    pub cap_degrees: Vec<(usize, usize)>,
    pub sphere: MarkedSphere,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingData {
    pub parts: Vec<ThickPart>,
    /// `(outer part, inner part)` on either side of each curve.
    pub adjacency: Vec<(usize, usize)>,
    /// Parallel preimages homotopic to each curve, outermost first, as
    /// `(image curve, degree)`.
    pub annuli: Vec<Vec<(usize, usize)>>,
    /// Part containing the image of each part.
    pub part_map: Vec<usize>,
    /// Degree of the map on each part.
    pub degrees: Vec<usize>,
    /// Puncture dynamics of each patched part.
    pub dynamics: Vec<Vec<PunctureImage>>,
    /// Periodic cycles of `part_map`, each starting at its smallest part.
    pub cycles: Vec<Vec<usize>>,
}

/// Sphere with `k` marked equator vertices and two unmarked poles.
fn bipyramid(k: usize) -> MarkedSphere {
    assert!(k >= 3);
    let (north, south) = (k, k + 1);
    let mut t = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        t.push([i, j, north]);
        t.push([j, i, south]);
    }
    let tri = build_triangulation(&t).expect("bipyramid is a sphere");
    MarkedSphere::new(tri, (0..k).collect()).expect("distinct vertices")
}

fn region_of(sf: &StandardForm, z: usize) -> usize {
    let sp = sf.map.spine();
    (0..sf.curves.len())
        .filter(|&j| sf.inner_vertices[j].contains(&z))
        .min_by_key(|&j| sides(sp, &sf.curves[j]).1.len())
        .map_or(0, |j| j + 1)
}

/// Cut along the multicurve, cap the holes and read off the combinatorics
/// of the patched maps.
pub fn decompose(sf: &StandardForm) -> Result<(GluingData, Vec<PatchedSphere>), DecompositionError> {
    let f = &sf.map;
    let fail = |s: String| Err(DecompositionError::Unsupported(s));
    let marked: Vec<usize> = f.marked().iter().map(|&q| f.embed()[q]).collect();
    let nv = f.domain().vertex_count();
    let pre = &sf.preimages;
    let bundle = |j: usize| -> Vec<usize> {
        let mut b: Vec<usize> = (0..pre.len()).filter(|&i| pre[i].class == ComponentClass::Essential(j)).collect();
        b.sort_by_key(|&i| std::cmp::Reverse(pre[i].inside.len()));
        b
    };
    let mut adjacency = Vec::new();
    let mut annuli = Vec::new();
    for j in 0..sf.curves.len() {
        let outer = sf.parts.iter().position(|p| p.boundary.contains(&j)).expect("curve bounds a part");
        adjacency.push((outer, j + 1));
        annuli.push(bundle(j).iter().map(|&i| (pre[i].image, pre[i].degree)).collect());
    }

    let mut part_map = Vec::new();
    let mut degrees = Vec::new();
    let mut dynamics = Vec::new();
    let mut patched = Vec::new();
    for (r, part) in sf.parts.iter().enumerate() {
        // Bounding components and the vertex set of the domain piece.
        let mut verts: BTreeSet<usize> = (0..nv).collect();
        let mut bounding: Vec<(Puncture, usize)> = Vec::new();
        for &j in &part.boundary {
            let b = bundle(j);
            let c = if r == j + 1 { *b.last().unwrap() } else { b[0] };
            if r == j + 1 {
                verts.retain(|v| pre[c].inside.contains(v));
            } else {
                verts.retain(|v| !pre[c].inside.contains(v));
            }
            bounding.push((Puncture::Cap(j), c));
        }
        let essential_verts = verts.clone();
        let mut holes = Vec::new();
        for (i, c) in pre.iter().enumerate() {
            if matches!(c.class, ComponentClass::Essential(_)) {
                continue;
            }
            verts.retain(|v| !c.inside.contains(v));
            if !c.inside.is_subset(&essential_verts) {
                continue;
            }
            // Outermost among disks in this piece.
            let covered = pre.iter().enumerate().any(|(k, o)| {
                k != i && !matches!(o.class, ComponentClass::Essential(_)) && o.inside.is_subset(&essential_verts) && c.inside.is_subset(&o.inside) && o.inside != c.inside
            });
            if !covered {
                holes.push(i);
            }
        }
        if verts.is_empty() {
            return fail(format!("part {r} has no vertex"));
        }
        let image = region_of(sf, f.vertex_image()[*verts.iter().next().unwrap()]);
        if verts.iter().any(|&y| region_of(sf, f.vertex_image()[y]) != image) {
            return fail(format!("part {r} does not map into a single part"));
        }
        let target = &sf.parts[image];
        let targets: Vec<usize> = (0..f.codomain().vertex_count()).filter(|&z| region_of(sf, z) == image).collect();
        let deg_over = |z: usize| -> usize {
            verts.iter().filter(|&&y| f.vertex_image()[y] == z).map(|&y| f.local_degree(y)).sum()
        };
        let deg = deg_over(targets[0]);
        if deg == 0 || targets.iter().any(|&z| deg_over(z) != deg) {
            return fail(format!("part {r} does not cover its image"));
        }

        let mut dyn_r = Vec::new();
        let cap_image = |c: usize| -> Result<Puncture, DecompositionError> {
            let k = pre[c].image;
            if target.boundary.contains(&k) {
                Ok(Puncture::Cap(k))
            } else {
                Err(DecompositionError::Unsupported(format!("hole maps to curve {k} away from part {image}")))
            }
        };
        let mut rh = 0usize;
        for &i in &part.marked {
            let periph: Option<usize> = holes.iter().copied().find(|&c| pre[c].class == ComponentClass::Peripheral(i));
            let img = match periph {
                Some(c) => PunctureImage {
                    from: Puncture::Marked(i),
                    to: cap_image(c)?,
                    degree: pre[c].degree,
                },
                None => {
                    let j = f.dynamics()[i];
                    if !target.marked.contains(&j) || !verts.contains(&marked[i]) {
                        return fail(format!("marked point {i} leaves part {r}"));
                    }
                    PunctureImage {
                        from: Puncture::Marked(i),
                        to: Puncture::Marked(j),
                        degree: f.local_degree(marked[i]),
                    }
                }
            };
            dyn_r.push(img);
        }
        let mut cap_degrees = Vec::new();
        for &(p, c) in &bounding {
            let Puncture::Cap(j) = p else { unreachable!() };
            dyn_r.push(PunctureImage {
                from: p,
                to: cap_image(c)?,
                degree: pre[c].degree,
            });
            cap_degrees.push((j, pre[c].degree));
        }
        for &c in &holes {
            cap_image(c)?;
            rh += pre[c].degree - 1;
        }
        for &(_, c) in &bounding {
            rh += pre[c].degree - 1;
        }
        rh += verts.iter().map(|&y| f.local_degree(y) - 1).sum::<usize>();
        if rh != 2 * deg - 2 {
            return fail(format!("part {r} fails Riemann-Hurwitz"));
        }
        let mut punctures: Vec<Puncture> = part.marked.iter().map(|&i| Puncture::Marked(i)).collect();
        punctures.extend(part.boundary.iter().map(|&j| Puncture::Cap(j)));
        patched.push(PatchedSphere {
            part: r,
            sphere: bipyramid(punctures.len()),
            punctures,
            cap_degrees,
        });
        part_map.push(image);
        degrees.push(deg);
        dynamics.push(dyn_r);
    }
    let cycles = cycles_of(&part_map);
    Ok((
        GluingData {
            parts: sf.parts.clone(),
            adjacency,
            annuli,
            part_map,
            degrees,
            dynamics,
            cycles,
        },
        patched,
    ))
}

fn cycles_of(map: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut on_cycle = vec![false; map.len()];
    for s in 0..map.len() {
        // Walk long enough to land on the cycle.
        let mut x = s;
        for _ in 0..map.len() {
            x = map[x];
        }
        if on_cycle[x] {
            continue;
        }
        let mut cyc = vec![x];
        on_cycle[x] = true;
        let mut y = map[x];
        while y != x {
            on_cycle[y] = true;
            cyc.push(y);
            y = map[y];
        }
        let k = cyc.iter().enumerate().min_by_key(|&(_, v)| *v).unwrap().0;
        cyc.rotate_left(k);
        out.push(cyc);
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ReturnKind {
    Homeomorphism,
    ThurstonMap,
}

/// The first return map to a periodic part, described by its degree and
/// the composed puncture dynamics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstReturn {
    pub cycle: Vec<usize>,
    pub degree: usize,
    pub kind: ReturnKind,
    pub dynamics: Vec<PunctureImage>,
}

pub fn first_return_maps(g: &GluingData) -> Vec<FirstReturn> {
    let step = |r: usize, p: Puncture| -> PunctureImage {
        *g.dynamics[r].iter().find(|d| d.from == p).expect("puncture of the part")
    };
    g.cycles
        .iter()
        .map(|cyc| {
            let r0 = cyc[0];
            let degree: usize = cyc.iter().map(|&r| g.degrees[r]).product();
            let dynamics = g.dynamics[r0]
                .iter()
                .map(|d0| {
                    let mut cur = *d0;
                    for &r in &cyc[1..] {
                        let next = step(r, cur.to);
                        cur = PunctureImage {
                            from: d0.from,
                            to: next.to,
                            degree: cur.degree * next.degree,
                        };
                    }
                    cur
                })
                .collect();
            FirstReturn {
                cycle: cyc.clone(),
                degree,
                kind: if degree == 1 {
                    ReturnKind::Homeomorphism
                } else {
                    ReturnKind::ThurstonMap
                },
                dynamics,
            }
        })
        .collect()
}
