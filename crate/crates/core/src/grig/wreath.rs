//! Wreath recursion for the Grigorchuk group and the resulting actions on
//! vertices and on boundary points.
//!
//! An element is written `g = σ · (g0, g1)` meaning `g(i v) = σ(i) g_i(v)`:
//! sections are indexed by the source subtree. With that convention the
//! product rule is `(gh)_i = g_{σ_h(i)} h_i`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::tree::{BoundaryPoint, Vertex};
use super::word::{Gen, GroupWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootPerm {
    Identity,
    Swap,
}

impl RootPerm {
    pub fn apply(self, bit: u8) -> u8 {
        match self {
            RootPerm::Identity => bit,
            RootPerm::Swap => bit ^ 1,
        }
    }

    pub fn compose(self, other: RootPerm) -> RootPerm {
        if self == other {
            RootPerm::Identity
        } else {
            RootPerm::Swap
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathDecomposition {
    pub perm: RootPerm,
    pub section0: GroupWord,
    pub section1: GroupWord,
}

impl WreathDecomposition {
    pub fn section(&self, bit: u8) -> &GroupWord {
        if bit == 0 {
            &self.section0
        } else {
            &self.section1
        }
    }
}

impl Gen {
    /// The defining recursion: `a = σ(e, e)`, `b = (a, c)`, `c = (a, d)`,
    /// `d = (e, b)`.
    pub fn decompose(self) -> (RootPerm, Option<Gen>, Option<Gen>) {
        match self {
            Gen::A => (RootPerm::Swap, None, None),
            Gen::B => (RootPerm::Identity, Some(Gen::A), Some(Gen::C)),
            Gen::C => (RootPerm::Identity, Some(Gen::A), Some(Gen::D)),
            Gen::D => (RootPerm::Identity, None, Some(Gen::B)),
        }
    }

    /// One transducer step: output bit and the section to continue with.
    fn step(self, bit: u8) -> (u8, Option<Gen>) {
        let (perm, s0, s1) = self.decompose();
        (perm.apply(bit), if bit == 0 { s0 } else { s1 })
    }

    fn act_bits(self, bits: &mut [u8]) {
        let mut state = Some(self);
        for bit in bits.iter_mut() {
            let Some(g) = state else { break };
            let (out, next) = g.step(*bit);
            *bit = out;
            state = next;
        }
    }

    /// Exact action on an eventually periodic sequence.
    fn act_point(self, x: &BoundaryPoint) -> BoundaryPoint {
        let mut out = Vec::with_capacity(x.preperiod().len() + x.period().len());
        let mut state = Some(self);
        let pre = x.preperiod();
        for (i, &bit) in pre.iter().enumerate() {
            let Some(g) = state else {
                out.extend_from_slice(&pre[i..]);
                return BoundaryPoint::new(out, x.period().to_vec()).expect("valid bits");
            };
            let (o, next) = g.step(bit);
            out.push(o);
            state = next;
        }
        let period = x.period();
        let mut seen: HashMap<(Gen, usize), usize> = HashMap::new();
        let mut pos = 0;
        loop {
            let Some(g) = state else {
                out.extend_from_slice(&period[pos..]);
                return BoundaryPoint::new(out, period.to_vec()).expect("valid bits");
            };
            if let Some(&start) = seen.get(&(g, pos)) {
                let cycle = out.split_off(start);
                return BoundaryPoint::new(out, cycle).expect("valid bits");
            }
            seen.insert((g, pos), out.len());
            let (o, next) = g.step(period[pos]);
            out.push(o);
            state = next;
            pos = (pos + 1) % period.len();
        }
    }
}

/// Level-1 decomposition of the product of the letters of `w`.
///
/// Sections are returned as unreduced concatenations of generator sections.
pub fn wreath_decompose(w: &GroupWord) -> WreathDecomposition {
    let mut perm = RootPerm::Identity;
    let mut sections: [Vec<Gen>; 2] = [Vec::new(), Vec::new()];
    for &letter in w.letters() {
        let (lp, l0, l1) = letter.decompose();
        let letter_sections = [l0, l1];
        // (acc · l)_i = acc_{σ_l(i)} l_i
        let mut next: [Vec<Gen>; 2] = [Vec::new(), Vec::new()];
        for i in 0..2u8 {
            let mut s = sections[lp.apply(i) as usize].clone();
            s.extend(letter_sections[i as usize]);
            next[i as usize] = s;
        }
        sections = next;
        perm = perm.compose(lp);
    }
    let [s0, s1] = sections;
    WreathDecomposition {
        perm,
        section0: GroupWord::new(s0),
        section1: GroupWord::new(s1),
    }
}

/// Image of `v` under the element represented by `w`.
pub fn act_vertex(w: &GroupWord, v: &Vertex) -> Vertex {
    let mut image = v.clone();
    for &letter in w.letters().iter().rev() {
        letter.act_bits(image.bits_mut());
    }
    image
}

/// The first `n` coordinates of the image of `x`.
pub fn act_boundary_prefix(w: &GroupWord, x: &BoundaryPoint, n: usize) -> Vertex {
    act_vertex(w, &x.prefix(n))
}

/// Exact image of an eventually periodic boundary point.
pub fn act_boundary(w: &GroupWord, x: &BoundaryPoint) -> BoundaryPoint {
    w.letters()
        .iter()
        .rev()
        .fold(x.clone(), |point, &letter| letter.act_point(&point))
}

/// Section of `w` at vertex `v`, i.e. the element `w|_v` with
/// `w(v u) = w(v) w|_v(u)`. Reduced at every step.
pub fn section_at(w: &GroupWord, v: &Vertex) -> GroupWord {
    v.bits().iter().fold(w.reduced(), |current, &bit| {
        wreath_decompose(&current).section(bit).reduced()
    })
}

/// Word problem by contraction.
///
/// After free reduction a word of length `L ≥ 2` alternates `a` with Klein
/// letters, so each section has length at most `⌈L/2⌉ < L` and the recursion
/// terminates.
pub fn is_identity(w: &GroupWord) -> bool {
    let r = w.reduced();
    match r.len() {
        0 => true,
        1 => false,
        _ => {
            if r.count(Gen::A) % 2 == 1 {
                return false;
            }
            let dec = wreath_decompose(&r);
            is_identity(&dec.section0) && is_identity(&dec.section1)
        }
    }
}
