//! Deterministic property checks shared by the acceptance and property
//! test targets. Each returns `Err` with a description of the first
//! counterexample.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfsim_core::grig::{
    act_vertex, is_identity, words_up_to, wreath_decompose, BoundaryPoint, Gen, GroupWord, Vertex,
};
use selfsim_core::hecke::{level_generator_matrices, OperatorMatrix, Permutation};
use selfsim_core::renorm::{in_omega, renormalize, Param};
use selfsim_core::schreier::{orbital_ball, standard_generators};
use selfsim_core::spectra::{spectral_shift_check, sym_eigs};

pub type Check = Result<String, String>;

/// Action on `bits` rebuilt from the wreath decomposition alone.
pub fn act_by_decomposition(w: &GroupWord, bits: &[u8]) -> Vec<u8> {
    match bits.split_first() {
        None => Vec::new(),
        Some((&first, rest)) => {
            let dec = wreath_decompose(w);
            let mut image = vec![dec.perm.apply(first)];
            image.extend(act_by_decomposition(dec.section(first), rest));
            image
        }
    }
}

/// `act_vertex` agrees with the recursive decomposition for all words up to
/// `max_len` and all vertices up to `max_level`.
pub fn decomposition_soundness(max_len: usize, max_level: usize) -> Check {
    let mut checked = 0usize;
    for w in words_up_to(max_len) {
        for n in 0..=max_level {
            for v in Vertex::level_set(n) {
                let direct = act_vertex(&w, &v);
                let rebuilt = act_by_decomposition(&w, v.bits());
                if direct.bits() != rebuilt.as_slice() {
                    return Err(format!("word {w} at vertex {v}: {direct} vs {rebuilt:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (word, vertex) pairs"))
}

/// `is_identity(w)` iff `w` acts trivially on `V_level`, for every word up
/// to `max_len`. The action is accumulated letter by letter along a
/// depth-first walk over words.
pub fn word_problem_vs_action(max_len: usize, level: usize) -> Check {
    let gens = level_generator_matrices(level).map_err(|e| e.to_string())?;
    let mut trivial = 0usize;
    let mut total = 0usize;
    let mut stack = vec![(GroupWord::identity(), Permutation::identity(gens.dim()))];
    while let Some((w, perm)) = stack.pop() {
        total += 1;
        let acts_trivially = perm.is_identity();
        if is_identity(&w) != acts_trivially {
            return Err(format!(
                "word {w}: is_identity = {}, trivial on V_{level} = {acts_trivially}",
                !acts_trivially
            ));
        }
        trivial += usize::from(acts_trivially);
        if w.len() < max_len {
            for &g in Gen::ALL.iter().rev() {
                // the new letter acts first
                stack.push((w.concat(&GroupWord::letter(g)), perm.compose(gens.generator(g))));
            }
        }
    }
    Ok(format!("{total} words, {trivial} trivial"))
}

/// The radius-`r` ball is the induced subgraph of the radius-`r+1` ball on
/// its first vertices, with the same root.
pub fn ball_monotonicity(points: &[BoundaryPoint], max_radius: usize, depth: usize) -> Check {
    let gens = standard_generators();
    let mut pairs = 0;
    for x in points {
        let mut previous = orbital_ball(x, &gens, 0, depth).map_err(|e| e.to_string())?;
        for r in 1..=max_radius {
            let next = orbital_ball(x, &gens, r, depth).map_err(|e| e.to_string())?;
            let k = previous.vertex_count();
            if next.ids()[..k] != *previous.ids() || next.root() != previous.root() {
                return Err(format!("ball at {x}: radius {} is not a prefix of radius {r}", r - 1));
            }
            for v in 0..k {
                for l in 0..gens.len() {
                    let inside = next.out(v, l).filter(|&t| t < k);
                    if inside != previous.out(v, l) {
                        return Err(format!("ball at {x}, radius {r}: edge mismatch at vertex {v}"));
                    }
                }
            }
            previous = next;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} nested ball pairs"))
}

/// Radical inverse of `i` in `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut scale = 1.0 / base as f64;
    while i > 0 {
        result += (i % base) as f64 * scale;
        i /= base;
        scale /= base as f64;
    }
    result
}

/// `p ∈ Ω ⟺ F(p) ∈ Ω` on `count` Halton points of `[-half, half]²`.
pub fn omega_two_way(count: u64, half: f64) -> Check {
    let mut inside = 0usize;
    let mut skipped = 0usize;
    for i in 1..=count {
        let p = Param::new(
            (2.0 * radical_inverse(i, 2) - 1.0) * half,
            (2.0 * radical_inverse(i, 3) - 1.0) * half,
        );
        if p.is_pole() {
            skipped += 1;
            continue;
        }
        let image = renormalize(p).map_err(|e| e.to_string())?;
        if in_omega(p) != in_omega(image) {
            return Err(format!(
                "({}, {}) in Ω = {}, image ({}, {}) in Ω = {}",
                p.alpha,
                p.beta,
                in_omega(p),
                image.alpha,
                image.beta,
                in_omega(image)
            ));
        }
        inside += usize::from(in_omega(p));
    }
    Ok(format!("{count} points, {inside} in Ω, {skipped} on poles"))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> OperatorMatrix {
    let mut triplets = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            let v: f64 = rng.gen_range(-1.0..=1.0);
            triplets.push((i, j, v));
            if i != j {
                triplets.push((j, i, v));
            }
        }
    }
    OperatorMatrix::from_triplets(dim, triplets)
}

/// Spectral-shift agreement on `matrices` random symmetric matrices of
/// dimension at most 16: ten random probes and ten computed eigenvalues
/// each.
pub fn spectral_shift_agreement(matrices: usize, seed: u64, tol: f64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut probes = 0usize;
    for k in 0..matrices {
        let dim = rng.gen_range(1..=16);
        let m = random_symmetric(&mut rng, dim);
        let spectrum = sym_eigs(&m).map_err(|e| e.to_string())?;
        let radius = 2.0 * spectrum.norm + 1.0;
        let mut alphas: Vec<f64> = (0..10)
            .map(|_| rng.gen_range(-spectrum.norm - 1.0..=spectrum.norm + 1.0))
            .collect();
        alphas.extend((0..10).map(|_| spectrum.eigenvalues[rng.gen_range(0..dim)]));
        for alpha in alphas {
            let report = spectral_shift_check(&m, alpha, radius, tol).map_err(|e| e.to_string())?;
            if !report.agree {
                return Err(format!("matrix {k} (dim {dim}), α = {alpha}: {report:?}"));
            }
            hits += usize::from(report.in_spectrum);
            probes += 1;
        }
    }
    Ok(format!("{probes} probes, {hits} in the spectrum"))
}

/// Sorted multiset comparison within `tol`.
pub fn same_multiset(x: &[f64], y: &[f64], tol: f64) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol)
}

/// Largest distance from a value of `inner` to the sorted set `outer`.
pub fn containment_gap(inner: &[f64], outer: &[f64]) -> f64 {
    inner
        .iter()
        .map(|&x| {
            let k = outer.partition_point(|&y| y < x);
            let right = outer.get(k).map_or(f64::INFINITY, |y| y - x);
            let left = k.checked_sub(1).map_or(f64::INFINITY, |i| x - outer[i]);
            right.min(left)
        })
        .fold(0.0, f64::max)
}
