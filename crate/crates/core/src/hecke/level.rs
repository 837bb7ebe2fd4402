use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grig::{Gen, GroupWord};

/// Largest level accepted by the assembly routines.
pub const MAX_LEVEL: usize = 20;

/// A permutation of `0..len`, stored as the image of each point.
///
/// As a matrix it is `P` with `P[image(i)][i] = 1`, so `P e_i = e_{image(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation((0..len as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Self {
        Permutation(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &i in &self.0 {
            match seen.get_mut(i as usize) {
                Some(slot) if !*slot => *slot = true,
                _ => return false,
            }
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Exchanges the images of `i` and `j`. Used to inject faults in tests.
    pub fn swap_images(&mut self, i: usize, j: usize) {
        self.0.swap(i, j);
    }

    pub fn to_dense(&self) -> DMatrix<i64> {
        let n = self.0.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &j) in self.0.iter().enumerate() {
            m[(j as usize, i)] = 1;
        }
        m
    }
}

/// Level-`n` matrices of the four generators, acting on functions on
/// `V_n` indexed by [`crate::grig::Vertex::index`].
///
/// They are built from the block recursion
/// `A = [[0, I], [I, 0]]`, `B = diag(A, C)`, `C = diag(A, D)`, `D = diag(I, B)`
/// with `1×1` identities at level 0. The recursion carries no measure
/// parameter: the same matrices serve every Bernoulli measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMatrices {
    pub level: usize,
    pub a: Permutation,
    pub b: Permutation,
    pub c: Permutation,
    pub d: Permutation,
}

impl LevelMatrices {
    pub fn dim(&self) -> usize {
        1 << self.level
    }

    pub fn generator(&self, g: Gen) -> &Permutation {
        match g {
            Gen::A => &self.a,
            Gen::B => &self.b,
            Gen::C => &self.c,
            Gen::D => &self.d,
        }
    }

    pub fn generator_mut(&mut self, g: Gen) -> &mut Permutation {
        match g {
            Gen::A => &mut self.a,
            Gen::B => &mut self.b,
            Gen::C => &mut self.c,
            Gen::D => &mut self.d,
        }
    }

    /// Exact permutation of a word, rightmost letter first.
    pub fn word(&self, w: &GroupWord) -> Permutation {
        w.letters()
            .iter()
            .rev()
            .fold(Permutation::identity(self.dim()), |acc, &g| {
                self.generator(g).compose(&acc)
            })
    }
}

pub fn level_generator_matrices(n: usize) -> Result<LevelMatrices> {
    if n > MAX_LEVEL {
        return Err(Error::LevelTooLarge {
            level: n,
            max: MAX_LEVEL,
        });
    }
    let mut a = vec![0u32];
    let mut b = vec![0u32];
    let mut c = vec![0u32];
    let mut d = vec![0u32];
    for k in 1..=n {
        let half = 1u32 << (k - 1);
        let diag = |top: &[u32], bottom: &[u32]| -> Vec<u32> {
            top.iter()
                .copied()
                .chain(bottom.iter().map(|&i| half + i))
                .collect()
        };
        let identity: Vec<u32> = (0..half).collect();
        let next_a: Vec<u32> = (0..2 * half).map(|i| i ^ half).collect();
        let next_b = diag(&a, &c);
        let next_c = diag(&a, &d);
        let next_d = diag(&identity, &b);
        (a, b, c, d) = (next_a, next_b, next_c, next_d);
    }
    Ok(LevelMatrices {
        level: n,
        a: Permutation(a),
        b: Permutation(b),
        c: Permutation(c),
        d: Permutation(d),
    })
}

/// A relation of the exact suite that failed, with the level it failed at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: &'static str,
    pub level: usize,
}

impl fmt::Display for RelationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "relation {} fails at level {}", self.relation, self.level)
    }
}

impl std::error::Error for RelationFailure {}

/// Names of the relations checked by [`verify_relations`], in order.
pub const RELATIONS: [&str; 16] = [
    "A is a permutation",
    "B is a permutation",
    "C is a permutation",
    "D is a permutation",
    "a^2 = e",
    "b^2 = e",
    "c^2 = e",
    "d^2 = e",
    "bc = d",
    "cb = d",
    "bd = c",
    "db = c",
    "cd = b",
    "dc = b",
    "(ad)^4 = e",
    "(B+C+D-I)^2 = 4I",
];

/// Checks the presentation relators and `(B+C+D-I)^2 = 4I` in exact integer
/// arithmetic.
pub fn verify_relations(m: &LevelMatrices) -> std::result::Result<(), RelationFailure> {
    let fail = |relation| RelationFailure {
        relation,
        level: m.level,
    };
    let gens = [&m.a, &m.b, &m.c, &m.d];
    for (g, name) in gens.iter().zip(&RELATIONS[0..4]) {
        if g.len() != m.dim() || !g.is_bijection() {
            return Err(fail(name));
        }
    }
    for (g, name) in gens.iter().zip(&RELATIONS[4..8]) {
        if !g.compose(g).is_identity() {
            return Err(fail(name));
        }
    }
    let products = [
        (&m.b, &m.c, &m.d),
        (&m.c, &m.b, &m.d),
        (&m.b, &m.d, &m.c),
        (&m.d, &m.b, &m.c),
        (&m.c, &m.d, &m.b),
        (&m.d, &m.c, &m.b),
    ];
    for ((x, y, z), name) in products.iter().zip(&RELATIONS[8..14]) {
        if x.compose(y) != **z {
            return Err(fail(name));
        }
    }
    let ad = m.a.compose(&m.d);
    let ad4 = ad.compose(&ad).compose(&ad.compose(&ad));
    if !ad4.is_identity() {
        return Err(fail(RELATIONS[14]));
    }
    if !square_of_bcd_is_four(m) {
        return Err(fail(RELATIONS[15]));
    }
    Ok(())
}

/// Column-by-column check of `(B+C+D-I)^2 = 4I` with integer entries.
fn square_of_bcd_is_four(m: &LevelMatrices) -> bool {
    let apply = |column: &BTreeMap<usize, i64>| {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for (&k, &coef) in column {
            for p in [&m.b, &m.c, &m.d] {
                *out.entry(p.apply(k)).or_default() += coef;
            }
            *out.entry(k).or_default() -= coef;
        }
        out.retain(|_, v| *v != 0);
        out
    };
    (0..m.dim()).all(|j| {
        let unit = BTreeMap::from([(j, 1i64)]);
        let square = apply(&apply(&unit));
        square.len() == 1 && square.get(&j) == Some(&4)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grig::{act_vertex, Vertex};

    #[test]
    fn level_zero_and_one() {
        let m0 = level_generator_matrices(0).unwrap();
        for g in Gen::ALL {
            assert_eq!(m0.generator(g).to_dense(), DMatrix::from_element(1, 1, 1));
        }
        let m1 = level_generator_matrices(1).unwrap();
        assert_eq!(m1.a.to_dense(), DMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]));
        for g in [Gen::B, Gen::C, Gen::D] {
            assert_eq!(m1.generator(g).to_dense(), DMatrix::identity(2, 2));
        }
    }

    #[test]
    fn level_two_by_hand() {
        let m2 = level_generator_matrices(2).unwrap();
        assert_eq!(m2.d.to_dense(), DMatrix::identity(4, 4));
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
            0, 1, 0, 0,
            1, 0, 0, 0,
            0, 0, 1, 0,
            0, 0, 0, 1,
        ]);
        assert_eq!(m2.b.to_dense(), expected);
        assert_eq!(m2.c.to_dense(), expected);
    }

    #[test]
    fn matches_vertex_action() {
        for n in 0..=10 {
            let m = level_generator_matrices(n).unwrap();
            for g in Gen::ALL {
                let word = GroupWord::letter(g);
                for v in Vertex::level_set(n) {
                    let image = act_vertex(&word, &v);
                    assert_eq!(m.generator(g).apply(v.index()), image.index());
                }
            }
        }
    }

    #[test]
    fn dense_square_relation_small_levels() {
        for n in 0..=6 {
            let m = level_generator_matrices(n).unwrap();
            let dim = m.dim();
            let s = m.b.to_dense() + m.c.to_dense() + m.d.to_dense() - DMatrix::identity(dim, dim);
            assert_eq!(&s * &s, DMatrix::identity(dim, dim) * 4);
        }
    }

    #[test]
    fn relations_hold_and_faults_are_named() {
        for n in 0..=8 {
            verify_relations(&level_generator_matrices(n).unwrap()).unwrap();
        }
        let mut m = level_generator_matrices(4).unwrap();
        m.d.swap_images(0, 1);
        let failure = verify_relations(&m).unwrap_err();
        assert_eq!(failure.level, 4);
        // still an involution, so the first casualty is the Klein table
        assert_eq!(failure.relation, "bc = d");
    }

    #[test]
    fn guard() {
        assert!(matches!(
            level_generator_matrices(21),
            Err(Error::LevelTooLarge { level: 21, .. })
        ));
    }
}
