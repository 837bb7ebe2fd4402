//! Hecke-type operators `U(m) = Σ m(s) U(s)` at finite level.
//!
//! Coefficients are real. Every element supported on `{e, a, b, c, d}` is
//! self-adjoint because all generators are involutions.

mod level;
mod matrix;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grig::{is_identity, Gen, GroupWord};
use crate::renorm::{renormalize, Param};
use crate::schreier::MarkedGraph;

pub use level::{
    level_generator_matrices, verify_relations, LevelMatrices, Permutation, RelationFailure,
    MAX_LEVEL, RELATIONS,
};
pub use matrix::{MatrixMeta, OperatorMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub word: GroupWord,
    pub coef: f64,
}

/// A finitely supported real function on the group.
///
/// Words naming the same group element are merged (the word problem decides
/// equality) and the shortest, then lexicographically least, reduced word is
/// kept as representative. Terms with zero coefficient are dropped and the
/// rest are ordered by representative.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementJson", into = "ElementJson")]
pub struct AlgebraElement {
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    terms: Vec<Term>,
}

impl TryFrom<ElementJson> for AlgebraElement {
    type Error = Error;

    fn try_from(value: ElementJson) -> Result<Self> {
        if let Some(t) = value.terms.iter().find(|t| !t.coef.is_finite()) {
            return Err(Error::InvalidElement(format!(
                "coefficient of {:?} is not finite",
                t.word.to_string()
            )));
        }
        Ok(AlgebraElement::from_terms(
            value.terms.into_iter().map(|t| (t.word, t.coef)),
        ))
    }
}

impl From<AlgebraElement> for ElementJson {
    fn from(value: AlgebraElement) -> Self {
        ElementJson { terms: value.terms }
    }
}

fn length_lex(x: &GroupWord, y: &GroupWord) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GroupWord, f64)>) -> Self {
        let mut acc: Vec<Term> = Vec::new();
        for (word, coef) in terms {
            let word = word.reduced();
            let inverse = word.inverse();
            match acc
                .iter_mut()
                .find(|t| is_identity(&inverse.concat(&t.word)))
            {
                Some(t) => {
                    t.coef += coef;
                    if length_lex(&word, &t.word) == Ordering::Less {
                        t.word = word;
                    }
                }
                None => acc.push(Term { word, coef }),
            }
        }
        acc.retain(|t| t.coef != 0.0);
        acc.sort_by(|x, y| length_lex(&x.word, &y.word));
        AlgebraElement { terms: acc }
    }

    /// `coef · e`.
    pub fn scalar(coef: f64) -> Self {
        Self::from_terms([(GroupWord::identity(), coef)])
    }

    /// The Markov operator `Δ = ¼(a + b + c + d)`.
    pub fn delta() -> Self {
        Self::from_terms(Gen::ALL.map(|g| (GroupWord::letter(g), 0.25)))
    }

    /// `a + b + c + d`, the adjacency operator of the Cayley graph.
    pub fn generator_sum() -> Self {
        Self::from_terms(Gen::ALL.map(|g| (GroupWord::letter(g), 1.0)))
    }

    /// `Q(α, β) = -α a + b + c + d - (β + 1) e`.
    pub fn q_param(alpha: f64, beta: f64) -> Self {
        Self::from_terms([
            (GroupWord::letter(Gen::A), -alpha),
            (GroupWord::letter(Gen::B), 1.0),
            (GroupWord::letter(Gen::C), 1.0),
            (GroupWord::letter(Gen::D), 1.0),
            (GroupWord::identity(), -(beta + 1.0)),
        ])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupWord> {
        self.terms.iter().map(|t| &t.word)
    }

    /// Coefficient of the element represented by `w`.
    pub fn coefficient(&self, w: &GroupWord) -> f64 {
        let inverse = w.inverse();
        self.terms
            .iter()
            .find(|t| is_identity(&inverse.concat(&t.word)))
            .map_or(0.0, |t| t.coef)
    }

    /// Generators occurring in some word of the support.
    pub fn letters(&self) -> BTreeSet<Gen> {
        self.terms
            .iter()
            .flat_map(|t| t.word.letters().iter().copied())
            .collect()
    }

    /// `m(g) = m(g⁻¹)` for every `g`.
    pub fn is_self_adjoint(&self) -> bool {
        self.terms
            .iter()
            .all(|t| self.coefficient(&t.word.inverse()) == t.coef)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidElement(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("algebra elements serialize")
    }
}

/// `U(m)` on functions on `V_n`: each word acts through the exact product
/// of its generator permutations; coefficients enter only at the end.
pub fn assemble_level(m: &AlgebraElement, n: usize) -> Result<OperatorMatrix> {
    let gens = level_generator_matrices(n)?;
    Ok(assemble_with(m, &gens))
}

pub fn assemble_with(m: &AlgebraElement, gens: &LevelMatrices) -> OperatorMatrix {
    let dim = gens.dim();
    let mut triplets = Vec::with_capacity(dim * m.terms().len());
    for term in m.terms() {
        let perm = gens.word(&term.word);
        triplets.extend((0..dim).map(|v| (perm.apply(v), v, term.coef)));
    }
    OperatorMatrix::from_triplets(dim, triplets)
}

/// `Q_n(α, β) = -α A_n + B_n + C_n + D_n - (β + 1) I`.
pub fn assemble_q_param(alpha: f64, beta: f64, n: usize) -> Result<OperatorMatrix> {
    assemble_level(&AlgebraElement::q_param(alpha, beta), n)
}

/// The groupoid form `diag(Y, Y)` with `Y = U_n(m)`.
pub fn groupoid_block(m: &AlgebraElement, n: usize) -> Result<OperatorMatrix> {
    let y = assemble_level(m, n)?;
    Ok(y.block_diag(&y))
}

/// Compression of the quasi-regular operator to a finite ball.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalOperator {
    pub matrix: OperatorMatrix,
    /// `true` for rows whose value depends on vertices outside the ball.
    pub boundary: Vec<bool>,
}

impl OrbitalOperator {
    pub fn interior_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| !b).count()
    }
}

/// `(ρ_x(m) f)(y) = Σ m(w) f(w⁻¹ y)` restricted to functions on `ball`.
///
/// `w⁻¹ y` is found by following the letters of `w` from the left, one edge
/// at a time. Rows where some path leaves the ball are flagged and the
/// missing terms dropped.
pub fn assemble_orbital(m: &AlgebraElement, ball: &MarkedGraph) -> Result<OrbitalOperator> {
    let mut labels = Vec::new();
    for g in m.letters() {
        let name = g.to_string();
        match ball.label_index(&name) {
            Some(idx) => labels.push((g, idx)),
            None => return Err(Error::MissingLabel(name)),
        }
    }
    let label_of = |g: Gen| labels.iter().find(|(h, _)| *h == g).map(|&(_, i)| i).expect("checked");
    let dim = ball.vertex_count();
    let mut boundary = vec![false; dim];
    let mut triplets = Vec::new();
    for (y, flag) in boundary.iter_mut().enumerate() {
        for term in m.terms() {
            let target = term
                .word
                .letters()
                .iter()
                .try_fold(y, |v, &g| ball.out(v, label_of(g)));
            match target {
                Some(z) => triplets.push((y, z, term.coef)),
                None => *flag = true,
            }
        }
    }
    Ok(OrbitalOperator {
        matrix: OperatorMatrix::from_triplets(dim, triplets),
        boundary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    pub level: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `F(α, β)`, the parameter of the lower-right block.
    pub image: Param,
    pub residual: f64,
    pub passed: bool,
}

/// Largest level for the dense block identity check.
pub const SCHUR_MAX_LEVEL: usize = 11;

/// Verifies the block identity
///
/// ```text
/// Q_n(α,β) [[I, α(2A+βI)/(4-β²)], [0, I]] = [[2A-βI, 0], [-αI, Q_{n-1}(F(α,β))]]
/// ```
///
/// with `A = A_{n-1}`, reporting the largest entrywise residual.
pub fn schur_step_check(alpha: f64, beta: f64, n: usize, tol: f64) -> Result<SchurReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("the block identity needs n >= 1".into()));
    }
    if n > SCHUR_MAX_LEVEL {
        return Err(Error::LevelTooLarge {
            level: n,
            max: SCHUR_MAX_LEVEL,
        });
    }
    let image = renormalize(Param::new(alpha, beta))?;
    let half = 1usize << (n - 1);
    let q = assemble_q_param(alpha, beta, n)?.to_dense();
    let a = level_generator_matrices(n - 1)?.a.to_dense().map(|x| x as f64);
    let id = DMatrix::<f64>::identity(half, half);
    let scale = alpha / (4.0 - beta * beta);

    let mut corrector = DMatrix::<f64>::identity(2 * half, 2 * half);
    corrector
        .view_mut((0, half), (half, half))
        .copy_from(&((&a * 2.0 + &id * beta) * scale));
    let product = q * corrector;

    let lower = assemble_q_param(image.alpha, image.beta, n - 1)?.to_dense();
    let mut expected = DMatrix::<f64>::zeros(2 * half, 2 * half);
    expected
        .view_mut((0, 0), (half, half))
        .copy_from(&(&a * 2.0 - &id * beta));
    expected
        .view_mut((half, 0), (half, half))
        .copy_from(&(&id * -alpha));
    expected.view_mut((half, half), (half, half)).copy_from(&lower);

    let residual = (product - expected).amax();
    Ok(SchurReport {
        level: n,
        alpha,
        beta,
        image,
        residual,
        passed: residual <= tol,
    })
}
