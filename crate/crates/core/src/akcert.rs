//! Fiberings of the Atiyah–Kodaira manifold `M_AK`, the `S₆`-bundle over
//! `S₁₂₉` obtained from the double cover `S₆ → S₃` branched at `b, τ(b)`.
//!
//! The base `S₁₂₉` is the cover of `S₃` for `π₁(S₃) → H₁(S₃; Z/2)`. Its
//! fundamental group is generated by lifts of kernel elements; the squares
//! used here act on `H₁(S₆)` through [`DoubleCoverModel::ak_monodromy_element`].

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::json;

use crate::branchedcover::{DoubleCoverModel, LiftVariant, Sign};
use crate::certificate::{Conclusion, FiberingCertificate};
use crate::error::{Error, Result};
use crate::exactq::{fixed_space, RationalMatrix, Subspace};
use crate::homology::{tau_involution, HClass, MappingAction};
use crate::prodring::{two_fibering_certificate, FiberingDecomposition, H2_INJECTIVITY_AXIOM, NICK_AXIOM};
use crate::surfgroup::{
    abelianized_rank, kernel_membership, mod2_homology_cover, reidemeister_schreier,
    riemann_hurwitz_genus, SurfacePresentation, Word,
};

pub const BASE_GENUS: usize = 3;
pub const MANIFOLD: &str = "Atiyah-Kodaira manifold M_AK (S_6-bundle over S_129)";

pub const DEFAULT_WORDS: [&str; 8] = [
    "a1 a1",
    "a2 a2",
    "a3 a3",
    "b1 b1",
    "b2 b2",
    "b3 b3",
    "b2 a1 b2 a1",
    "b2 a3 b2 a3",
];

/// Two words and their analogues under `a ↔ b`; leaves `d_{a₂}` unconstrained.
pub const MINIMAL_WORDS: [&str; 4] = ["a1 a1", "b2 a1 b2 a1", "b1 b1", "b2 b1 b2 b1"];

pub const KAHLER_AXIOM: &str =
    "M_AK is a Kähler surface, so b1(M_AK) is even";

/// A square `w·w` in the mod-2 kernel, with its root class `γ = [w]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectedWord {
    pub text: String,
    pub word: Word,
    pub root: Word,
    #[serde(serialize_with = "serialize_class")]
    pub gamma: HClass,
    pub variant: LiftVariant,
}

fn serialize_class<S: serde::Serializer>(c: &HClass, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSelection {
    pub words: Vec<SelectedWord>,
}

impl GeneratorSelection {
    /// Parses words on `π₁(S₃)` (labels `a1 … b3`, uppercase = inverse).
    pub fn parse<S: AsRef<str>>(words: &[S], model: &DoubleCoverModel) -> Result<Self> {
        let pres = SurfacePresentation::closed(BASE_GENUS);
        let quotient = mod2_homology_cover(BASE_GENUS);
        let mut selected = Vec::with_capacity(words.len());
        for text in words {
            let text = text.as_ref();
            let invalid = |reason: &str| Error::InvalidWord {
                word: text.to_string(),
                reason: reason.to_string(),
            };
            let word = pres.presentation.parse_word(text)?.reduced();
            if word.is_empty() {
                return Err(invalid("word is trivial"));
            }
            if !kernel_membership(&word, &quotient)? {
                return Err(invalid("not in the kernel of the mod-2 homology map"));
            }
            let root = word
                .square_root()
                .ok_or_else(|| invalid("not a square w·w"))?;
            let sums = root.exponent_sums(pres.presentation.rank());
            let gamma = HClass::from_i64(model.base(), &sums)?;
            if model.epsilon_of(&gamma)? != 0 {
                return Err(invalid("root class has a single lift"));
            }
            selected.push(SelectedWord {
                text: text.to_string(),
                word,
                root,
                gamma,
                variant: LiftVariant::default(),
            });
        }
        Ok(GeneratorSelection { words: selected })
    }

    pub fn default_selection(model: &DoubleCoverModel) -> Self {
        GeneratorSelection::parse(&DEFAULT_WORDS, model).expect("default words are valid")
    }

    pub fn minimal_selection(model: &DoubleCoverModel) -> Self {
        GeneratorSelection::parse(&MINIMAL_WORDS, model).expect("minimal words are valid")
    }

    pub fn with_variant(mut self, variant: LiftVariant) -> Self {
        for w in &mut self.words {
            w.variant = variant;
        }
        self
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn texts(&self) -> Vec<String> {
        self.words.iter().map(|w| w.text.clone()).collect()
    }
}

pub fn monodromy_matrices(selection: &GeneratorSelection, model: &DoubleCoverModel) -> Result<Vec<MappingAction>> {
    let tau = tau_involution(model.base())?;
    selection
        .words
        .iter()
        .map(|w| model.ak_monodromy_element(&w.gamma, &tau, w.variant))
        .collect()
}

/// Simultaneous fixed space on `H₁(S₆; Q)` of the selected monodromies.
pub fn invariant_subspace(selection: &GeneratorSelection, model: &DoubleCoverModel) -> Result<Subspace> {
    if selection.is_empty() {
        return Err(Error::Precondition("empty generator selection".into()));
    }
    let matrices: Vec<RationalMatrix> = monodromy_matrices(selection, model)?
        .into_iter()
        .map(|m| m.matrix().clone())
        .collect();
    fixed_space(model.cover().dim(), &matrices)
}

fn base_b1_live() -> usize {
    static CACHE: OnceLock<usize> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let pres = SurfacePresentation::closed(BASE_GENUS);
        let sub = reidemeister_schreier(&pres, &mod2_homology_cover(BASE_GENUS))
            .expect("mod-2 quotient is surjective");
        abelianized_rank(&sub)
    })
}

/// `b₁(S₁₂₉)`, computed by Reidemeister–Schreier on the mod-2 cover of `S₃`.
pub fn base_b1() -> usize {
    base_b1_live()
}

/// `2 × genus` of the degree-64 unbranched cover of `S₃`.
pub fn base_b1_riemann_hurwitz() -> usize {
    2 * riemann_hurwitz_genus(BASE_GENUS, 1 << (2 * BASE_GENUS), &[])
        .expect("unbranched cover of a closed surface")
}

pub fn b1_total(invariant_dim: usize) -> Result<usize> {
    if invariant_dim > 12 {
        return Err(Error::Precondition(format!(
            "invariant dimension {invariant_dim} exceeds dim H_1(S_6) = 12"
        )));
    }
    Ok(base_b1() + invariant_dim)
}

/// The unique `d ∈ [lower, upper]` with `base_b1 + d` even.
pub fn parity_filter(lower: usize, upper: usize, base_b1: usize) -> Result<usize> {
    if lower > upper {
        return Err(Error::Precondition(format!("empty range [{lower}, {upper}]")));
    }
    let hits: Vec<usize> = (lower..=upper).filter(|d| (base_b1 + d).is_multiple_of(2)).collect();
    match hits.as_slice() {
        [d] => Ok(*d),
        [] => Err(Error::Parity(format!(
            "no value in [{lower}, {upper}] gives an even total with {base_b1}"
        ))),
        _ => Err(Error::Parity(format!(
            "values {hits:?} in [{lower}, {upper}] all give an even total with {base_b1}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// The fixed space equals `H⁺` outright.
    Direct,
    /// `H⁺ ⊆ fixed ⊊ …` with the dimension pinned by the evenness of `b₁`.
    Parity,
    Unresolved,
}

pub fn ak_certificate(selection: &GeneratorSelection, model: &DoubleCoverModel) -> Result<FiberingCertificate> {
    let mut cert = FiberingCertificate::new(MANIFOLD);
    let plus = model.plus_space();
    let fixed = invariant_subspace(selection, model)?;
    let lower = plus.dim();
    let upper = fixed.dim();
    let contains_plus = plus.is_subspace_of(&fixed);
    cert.check(
        "transfer_image_is_invariant",
        contains_plus,
        json!({ "dim_plus": lower, "dim_fixed": upper, "words": selection.texts() }),
    );

    let b1_base = base_b1();
    let rh = base_b1_riemann_hurwitz();
    cert.check(
        "base_b1_cross_check",
        b1_base == rh,
        json!({ "reidemeister_schreier": b1_base, "riemann_hurwitz": rh }),
    );

    let (route, invariant) = if !contains_plus {
        (Route::Unresolved, None)
    } else if fixed == plus {
        (Route::Direct, Some(upper))
    } else {
        match parity_filter(lower, upper, b1_base) {
            Ok(d) => (Route::Parity, Some(d)),
            Err(_) => (Route::Unresolved, None),
        }
    };
    cert.check(
        "invariant_equals_plus_space",
        invariant == Some(lower),
        json!({
            "route": route,
            "bound": [lower, upper],
            "resolved": invariant,
        }),
    );
    if route == Route::Parity {
        cert.axiom(KAHLER_AXIOM);
    }

    let invariant_dim = invariant.unwrap_or(upper);
    let total = b1_total(invariant_dim)?;
    cert.dim("invariant", invariant_dim as u64);
    cert.dim("invariant_upper_bound", upper as u64);
    cert.dim("b1_base", b1_base as u64);
    cert.dim("b1_total", total as u64);
    cert.check(
        "h1_decomposition",
        invariant == Some(lower) && total == lower + b1_base,
        json!({ "pullback_from_S3": lower, "pullback_from_S129": b1_base, "b1_total": total }),
    );

    cert.axiom(H2_INJECTIVITY_AXIOM);
    cert.axiom(NICK_AXIOM);

    if cert.all_passed() {
        let inner = two_fibering_certificate(
            FiberingDecomposition { b1_first: lower, b1_second: b1_base },
            true,
            true,
        )?;
        for c in inner.checks {
            cert.check(format!("two_fibering/{}", c.name), c.status == crate::certificate::CheckStatus::Pass, c.data);
        }
        let mut notes = vec![format!("fixed-space route: {route:?}")];
        if let Some(c) = inner.conclusion {
            notes.extend(c.notes);
            cert.conclude(Conclusion {
                fib: c.fib,
                statement: "M_AK fibers in exactly two ways: over S_129 and over S_3".into(),
                notes,
            });
        }
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub sign: Sign,
    /// Words whose lift is composed with the deck involution.
    pub sigma_twisted: Vec<String>,
    pub invariant_dim: usize,
    pub b1_total: usize,
}

/// Fixed-space dimension for a global sign and every subset of `σ`-twisted
/// words: `2^(n+1)` rows for `n` words.
pub fn lift_variant_survey(selection: &GeneratorSelection, model: &DoubleCoverModel) -> Result<Vec<SurveyRow>> {
    let n = selection.len();
    if n > 16 {
        return Err(Error::Precondition(format!("survey over {n} words is too large")));
    }
    let tau = tau_involution(model.base())?;
    let dim = model.cover().dim();
    let mut rows = Vec::with_capacity(1 << (n + 1));
    for sign in [Sign::Plus, Sign::Minus] {
        let mut plain = Vec::with_capacity(n);
        let mut twisted = Vec::with_capacity(n);
        for w in &selection.words {
            for (twist, out) in [(false, &mut plain), (true, &mut twisted)] {
                let m = model.ak_monodromy_element(&w.gamma, &tau, LiftVariant::new(sign, twist))?;
                out.push(m.matrix().clone());
            }
        }
        for mask in 0u32..(1 << n) {
            let matrices: Vec<RationalMatrix> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { twisted[i].clone() } else { plain[i].clone() })
                .collect();
            let d = fixed_space(dim, &matrices)?.dim();
            rows.push(SurveyRow {
                sign,
                sigma_twisted: (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| selection.words[i].text.clone())
                    .collect(),
                invariant_dim: d,
                b1_total: b1_total(d)?,
            });
        }
    }
    Ok(rows)
}
