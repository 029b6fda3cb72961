//! Words in the fundamental groupoid of a ribbon graph.
//!
//! A word is a sequence of half-edge ids. Half-edges of the spine are paired
//! so that the twin of `h` is `h ^ 1`; routines that work on other graphs take
//! the twin map as a closure.

pub fn twin(h: usize) -> usize {
    h ^ 1
}

pub fn inverse_with(w: &[usize], tw: impl Fn(usize) -> usize) -> Vec<usize> {
    w.iter().rev().map(|&h| tw(h)).collect()
}

pub fn inverse(w: &[usize]) -> Vec<usize> {
    inverse_with(w, twin)
}

/// Free reduction: cancel every `h, twin(h)` pair.
pub fn reduce_with(w: &[usize], tw: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(w.len());
    for &h in w {
        if out.last().is_some_and(|&l| tw(l) == h) {
            out.pop();
        } else {
            out.push(h);
        }
    }
    out
}

pub fn reduce(w: &[usize]) -> Vec<usize> {
    reduce_with(w, twin)
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[usize]) -> Vec<usize> {
    let r = reduce(w);
    let (mut i, mut j) = (0, r.len());
    while j - i >= 2 && twin(r[i]) == r[j - 1] {
        i += 1;
        j -= 1;
    }
    r[i..j].to_vec()
}

/// Start index of the lexicographically least rotation.
pub fn least_rotation(w: &[usize]) -> usize {
    let n = w.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (w[(i + k) % n], w[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

pub fn rotate(w: &[usize], k: usize) -> Vec<usize> {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    w[k..].iter().chain(&w[..k]).copied().collect()
}

/// Canonical representative of an unoriented cyclic word.
pub fn canonical_cyclic(w: &[usize]) -> Vec<usize> {
    let w = cyclic_reduce(w);
    let a = rotate(&w, least_rotation(&w));
    let inv = inverse(&w);
    let b = rotate(&inv, least_rotation(&inv));
    a.min(b)
}

/// True if `a` equals some rotation of `b`.
pub fn same_cyclic(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && rotate(a, least_rotation(a)) == rotate(b, least_rotation(b))
}
