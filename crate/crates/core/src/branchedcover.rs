//! The `Z/2` double cover `S₆ → S₃` branched at two points `b, b' = τ(b)`.
//!
//! Cover basis: `ā₁, b̄₁, …, ā₃, b̄₃, ã₁, b̃₁, …, ã₃, b̃₃`, where `c̄` and `c̃` are
//! the two lifts of a base class `c`. The form is `i(āᵢ, b̄ᵢ) = i(ãᵢ, b̃ᵢ) = 1`
//! with no bar/tilde cross terms, and the deck involution `σ` swaps the two
//! blocks. The cover class `ε` vanishes on every `aᵢ, bᵢ` and is `1` on both
//! branch loops, so every closed base class has two lifts.
//!
//! Only the invariants of this model are used downstream: `σ` is a
//! symplectic involution, `H⁺ = im p*`, `H⁻ ⟂ H⁺`, and the lifted squared
//! point pushes are transvections along classes in `H⁻`.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactq::{q, Rational, RationalMatrix, Subspace};
use crate::homology::{transvection_matrix, HClass, MappingAction, SymplecticSpace};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Which lift of a squared point push is used: the sign in front of the
/// transvection, and whether the lift is composed with the deck involution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct LiftVariant {
    pub sign: Sign,
    pub sigma_twist: bool,
}

impl LiftVariant {
    pub fn new(sign: Sign, sigma_twist: bool) -> Self {
        LiftVariant { sign, sigma_twist }
    }

    pub fn label(&self) -> String {
        format!(
            "{}{}",
            if self.sign == Sign::Plus { "+" } else { "-" },
            if self.sigma_twist { "σ" } else { "" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoverModel {
    base: Arc<SymplecticSpace>,
    cover: Arc<SymplecticSpace>,
    sigma: MappingAction,
    /// `ε` on the closed base basis followed by the two branch loops.
    epsilon: Vec<u8>,
    /// `(c̄, c̃)` for each base basis class.
    lifts: Vec<(HClass, HClass)>,
}

fn cover_labels(base_genus: usize) -> Vec<String> {
    let mut labels = Vec::with_capacity(4 * base_genus);
    for tag in ["bar", "til"] {
        for i in 1..=base_genus {
            labels.push(format!("a{tag}{i}"));
            labels.push(format!("b{tag}{i}"));
        }
    }
    labels
}

fn block_swap(base_dim: usize) -> RationalMatrix {
    let n = 2 * base_dim;
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..base_dim {
        m.set(i + base_dim, i, q(1));
        m.set(i, i + base_dim, q(1));
    }
    m
}

impl DoubleCoverModel {
    /// The genus-3 base with its genus-6 cover.
    pub fn standard() -> Self {
        DoubleCoverModel::for_base_genus(3)
    }

    /// The same construction over any base genus `g ≥ 1`; the cover has genus `2g`.
    pub fn for_base_genus(base_genus: usize) -> Self {
        let n = 2 * base_genus;
        let mut epsilon = vec![0u8; n];
        epsilon.extend([1, 1]);
        DoubleCoverModel::from_parts(base_genus, block_swap(n), epsilon)
            .expect("standard model satisfies its invariants")
    }

    /// Builds a model with an explicit deck matrix and cover class, checking
    /// every structural invariant.
    pub fn from_parts(base_genus: usize, sigma: RationalMatrix, epsilon: Vec<u8>) -> Result<Self> {
        let base = SymplecticSpace::new(base_genus);
        let cover = SymplecticSpace::with_labels(2 * base_genus, cover_labels(base_genus))?;
        let n = base.dim();
        if epsilon.len() != n + 2 {
            return Err(Error::InvalidModel(format!(
                "epsilon must have {} entries",
                n + 2
            )));
        }
        if epsilon[..n].iter().any(|&e| e != 0) {
            return Err(Error::InvalidModel(
                "epsilon must vanish on every closed basis class".into(),
            ));
        }
        if epsilon[n] != 1 || epsilon[n + 1] != 1 {
            return Err(Error::InvalidModel(
                "epsilon must be 1 on both branch loops".into(),
            ));
        }
        let sigma = MappingAction::new(&cover, sigma, "sigma")
            .map_err(|e| Error::InvalidModel(format!("deck involution: {e}")))?;
        if !sigma.compose(&sigma)?.is_identity() {
            return Err(Error::InvalidModel("sigma is not an involution".into()));
        }
        let plus = sigma.eigenspace(&q(1)).dim();
        let minus = sigma.eigenspace(&q(-1)).dim();
        if plus != n || minus != n {
            return Err(Error::InvalidModel(format!(
                "sigma eigenspaces have dimensions ({plus}, {minus}), expected ({n}, {n})"
            )));
        }
        let lifts: Vec<(HClass, HClass)> = (0..n)
            .map(|i| (HClass::basis(&cover, i), HClass::basis(&cover, i + n)))
            .collect();
        for (bar, tilde) in &lifts {
            if sigma.apply(bar)? != *tilde {
                return Err(Error::InvalidModel(
                    "sigma does not exchange the two lifts".into(),
                ));
            }
        }
        Ok(DoubleCoverModel {
            base,
            cover,
            sigma,
            epsilon,
            lifts,
        })
    }

    pub fn base(&self) -> &Arc<SymplecticSpace> {
        &self.base
    }

    pub fn cover(&self) -> &Arc<SymplecticSpace> {
        &self.cover
    }

    pub fn epsilon(&self) -> &[u8] {
        &self.epsilon
    }

    /// The deck involution on `H₁(S₆)`.
    pub fn sigma_star(&self) -> &MappingAction {
        &self.sigma
    }

    pub fn lift(&self, basis_index: usize) -> (&HClass, &HClass) {
        let (bar, tilde) = &self.lifts[basis_index];
        (bar, tilde)
    }

    pub fn plus_space(&self) -> Subspace {
        self.sigma.eigenspace(&q(1))
    }

    pub fn minus_space(&self) -> Subspace {
        self.sigma.eigenspace(&q(-1))
    }

    /// `ε(c)` for a class on the closed base.
    pub fn epsilon_of(&self, c: &HClass) -> Result<u8> {
        self.check_base(c)?;
        let mut total = Rational::zero();
        for (x, &e) in c.coords().iter().zip(&self.epsilon) {
            if e != 0 {
                total += x * q(i64::from(e));
            }
        }
        if !total.is_integer() {
            return Err(Error::Precondition(format!(
                "epsilon is undefined on the non-integral class `{c}`"
            )));
        }
        let v = total.to_integer() % 2u8;
        Ok(if v.is_zero() { 0 } else { 1 })
    }

    fn check_base(&self, c: &HClass) -> Result<()> {
        if c.space() != &self.base {
            return Err(Error::DimensionMismatch(
                "expected a class on the base surface".into(),
            ));
        }
        Ok(())
    }

    fn check_cover(&self, c: &HClass) -> Result<()> {
        if c.space() != &self.cover {
            return Err(Error::DimensionMismatch(
                "expected a class on the cover surface".into(),
            ));
        }
        Ok(())
    }

    /// `d_c = c̃ - c̄`, extended linearly.
    pub fn lift_difference(&self, c: &HClass) -> Result<HClass> {
        if self.epsilon_of(c)? == 1 {
            return Err(Error::SingleLift(c.to_string()));
        }
        let n = self.base.dim();
        let mut coords = vec![Rational::zero(); 2 * n];
        for (i, x) in c.coords().iter().enumerate() {
            if !x.is_zero() {
                coords[i] = -x.clone();
                coords[i + n] = x.clone();
            }
        }
        HClass::new(&self.cover, coords)
    }

    /// `p*(c) = c̄ + c̃`.
    pub fn transfer_up(&self, c: &HClass) -> Result<HClass> {
        self.check_base(c)?;
        let mut coords = c.coords().to_vec();
        coords.extend_from_slice(c.coords());
        HClass::new(&self.cover, coords)
    }

    /// `p_*`, sending both lifts of a class to the class.
    pub fn transfer_down(&self, c: &HClass) -> Result<HClass> {
        self.check_cover(c)?;
        let n = self.base.dim();
        let coords = (0..n).map(|i| &c.coords()[i] + &c.coords()[i + n]).collect();
        HClass::new(&self.base, coords)
    }

    /// `im p*` as a subspace of `H₁(S₆)`.
    pub fn transfer_image(&self) -> Subspace {
        let n = self.base.dim();
        let vectors: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                self.transfer_up(&HClass::basis(&self.base, i))
                    .expect("basis class on the base")
                    .into_coords()
            })
            .collect();
        Subspace::span(2 * n, &vectors).expect("cover dimension")
    }

    /// `Lift(Push(γ)²)`: `c ↦ c ± i(c, d_γ)·d_γ`, optionally followed by `σ`.
    pub fn lifted_push_squared(&self, gamma: &HClass, variant: LiftVariant) -> Result<MappingAction> {
        let d = self.lift_difference(gamma)?;
        let m = transvection_matrix(&self.cover, d.coords(), &q(variant.sign.value()));
        let m = if variant.sigma_twist {
            self.sigma.matrix() * &m
        } else {
            m
        };
        MappingAction::new(
            &self.cover,
            m,
            format!("Lift(Push[{gamma}]^2)[{}]", variant.label()),
        )
    }

    /// The same lift computed from Dehn twists, assuming the annulus curve
    /// `x` lifts to two copies `x̄, x̃` and `y` to one curve `y' = x̄ + x̃`:
    /// `T_{x̄}² T_{x̃}² T_{y'}⁻¹`.
    pub fn lifted_push_squared_via_twists(&self, gamma: &HClass) -> Result<MappingAction> {
        if self.epsilon_of(gamma)? == 1 {
            return Err(Error::SingleLift(gamma.to_string()));
        }
        let n = self.base.dim();
        let mut bar = vec![Rational::zero(); 2 * n];
        let mut tilde = vec![Rational::zero(); 2 * n];
        for (i, x) in gamma.coords().iter().enumerate() {
            bar[i] = x.clone();
            tilde[i + n] = x.clone();
        }
        let single: Vec<Rational> = bar.iter().zip(&tilde).map(|(a, b)| a + b).collect();
        let t_bar = transvection_matrix(&self.cover, &bar, &q(2));
        let t_tilde = transvection_matrix(&self.cover, &tilde, &q(2));
        let t_single_inv = transvection_matrix(&self.cover, &single, &q(-1));
        MappingAction::new(
            &self.cover,
            &(&t_bar * &t_tilde) * &t_single_inv,
            format!("T[x̄]^2·T[x̃]^2·T[y']^-1 for {gamma}"),
        )
    }

    /// Monodromy of `γ²` in the Atiyah–Kodaira bundle:
    /// `Lift(Push(γ)²)·Lift(Push(τγ)²)`, with the variant's `σ` applied once.
    pub fn ak_monodromy_element(
        &self,
        gamma: &HClass,
        tau: &MappingAction,
        variant: LiftVariant,
    ) -> Result<MappingAction> {
        self.check_base(gamma)?;
        if tau.space() != &self.base {
            return Err(Error::DimensionMismatch(
                "tau must act on the base surface".into(),
            ));
        }
        let tau_gamma = tau.apply(gamma)?;
        let first = self.lifted_push_squared(gamma, variant)?;
        let second = self.lifted_push_squared(&tau_gamma, LiftVariant::new(variant.sign, false))?;
        Ok(first
            .compose(&second)?
            .with_provenance(format!("phi({gamma}^2)[{}]", variant.label())))
    }

    /// Versioned JSON document: labels, form, deck matrix and cover class.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "version": MODEL_FORMAT_VERSION,
            "base_genus": self.base.genus(),
            "cover_genus": self.cover.genus(),
            "base_labels": self.base.labels(),
            "cover_labels": self.cover.labels(),
            "form": self.cover.form().to_string_rows(),
            "sigma": self.sigma.matrix().to_string_rows(),
            "epsilon": self.epsilon,
            "epsilon_labels": self
                .base
                .labels()
                .iter()
                .cloned()
                .chain(["loop(b)".to_string(), "loop(b')".to_string()])
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{intersection, tau_involution};

    fn model() -> DoubleCoverModel {
        DoubleCoverModel::standard()
    }

    fn base(m: &DoubleCoverModel, s: &str) -> HClass {
        HClass::parse(m.base(), s).unwrap()
    }

    fn cover(m: &DoubleCoverModel, s: &str) -> HClass {
        HClass::parse(m.cover(), s).unwrap()
    }

    #[test]
    fn sigma_exchanges_lifts() {
        let m = model();
        let s = m.sigma_star();
        assert_eq!(s.apply(&cover(&m, "abar1")).unwrap(), cover(&m, "atil1"));
        assert!(s.compose(s).unwrap().is_identity());
        assert_eq!(m.plus_space().dim(), 6);
        assert_eq!(m.minus_space().dim(), 6);
    }

    #[test]
    fn lift_difference_examples() {
        let m = model();
        assert_eq!(
            m.lift_difference(&base(&m, "a1")).unwrap(),
            cover(&m, "atil1 - abar1")
        );
        assert_eq!(
            m.lift_difference(&base(&m, "b2 + a1")).unwrap(),
            cover(&m, "btil2 + atil1 - bbar2 - abar1")
        );
        assert!(m.lift_difference(&HClass::zero(m.base())).unwrap().is_zero());
        let d = m.lift_difference(&base(&m, "a1 - 3 b3")).unwrap();
        assert!(m.minus_space().contains(d.coords()));
    }

    #[test]
    fn transfer_examples() {
        let m = model();
        let x = base(&m, "a1 + 2 b2 - a3");
        let y = base(&m, "b1 - b2 + 5 a3");
        let up = m.transfer_up(&x).unwrap();
        assert_eq!(m.transfer_down(&up).unwrap(), x.scale(&q(2)));
        assert_eq!(
            intersection(&up, &m.transfer_up(&y).unwrap()).unwrap(),
            intersection(&x, &y).unwrap() * q(2)
        );
        assert!(m.plus_space().contains(m.transfer_up(&base(&m, "a1")).unwrap().coords()));
        assert_eq!(m.transfer_image(), m.plus_space());
    }

    #[test]
    fn lifted_push_examples() {
        let m = model();
        let a1 = base(&m, "a1");
        let d = m.lift_difference(&a1).unwrap();
        let lp = m.lifted_push_squared(&a1, LiftVariant::default()).unwrap();
        // c ↦ c + i(c, d) d on a class with i(c, d) = -1.
        let c = cover(&m, "btil1");
        let expected = c.try_add(&d.scale(&intersection(&c, &d).unwrap())).unwrap();
        assert_eq!(lp.apply(&c).unwrap(), expected);
        assert_eq!(lp.apply(&d).unwrap(), d);
        for v in m.plus_space().basis() {
            let c = HClass::new(m.cover(), v.clone()).unwrap();
            assert_eq!(lp.apply(&c).unwrap(), c);
        }
    }

    #[test]
    fn twist_route_matches_formula() {
        let m = model();
        for s in ["a1", "b2 + a1", "a3 - 2 b1", "b2"] {
            let g = base(&m, s);
            assert_eq!(
                m.lifted_push_squared_via_twists(&g).unwrap().matrix(),
                m.lifted_push_squared(&g, LiftVariant::default()).unwrap().matrix()
            );
        }
    }

    #[test]
    fn sign_variants_are_inverse() {
        let m = model();
        let g = base(&m, "b2 + a1");
        for twist in [false, true] {
            let p = m.lifted_push_squared(&g, LiftVariant::new(Sign::Plus, twist)).unwrap();
            let n = m.lifted_push_squared(&g, LiftVariant::new(Sign::Minus, twist)).unwrap();
            assert!(p.compose(&n).unwrap().is_identity());
        }
    }

    #[test]
    fn ak_element_examples() {
        let m = model();
        let tau = tau_involution(m.base()).unwrap();
        let phi = m
            .ak_monodromy_element(&base(&m, "a1"), &tau, LiftVariant::default())
            .unwrap();
        let d1 = m.lift_difference(&base(&m, "a1")).unwrap();
        let d3 = m.lift_difference(&base(&m, "a3")).unwrap();
        for i in 0..12 {
            let c = HClass::basis(m.cover(), i);
            let expected = c
                .try_add(&d1.scale(&intersection(&c, &d1).unwrap()))
                .unwrap()
                .try_add(&d3.scale(&intersection(&c, &d3).unwrap()))
                .unwrap();
            assert_eq!(phi.apply(&c).unwrap(), expected);
        }
        let phi2 = m
            .ak_monodromy_element(&base(&m, "a2"), &tau, LiftVariant::default())
            .unwrap();
        let d2 = m.lift_difference(&base(&m, "a2")).unwrap();
        let double = transvection_matrix(m.cover(), d2.coords(), &q(2));
        assert_eq!(phi2.matrix(), &double);
    }

    #[test]
    fn adversarial_models_rejected() {
        let mut eps = vec![0u8; 6];
        eps.extend([1, 1]);
        assert!(matches!(
            DoubleCoverModel::from_parts(3, RationalMatrix::identity(12), eps.clone()),
            Err(Error::InvalidModel(_))
        ));
        let mut bad_eps = eps.clone();
        bad_eps[0] = 1;
        assert!(DoubleCoverModel::from_parts(3, block_swap(6), bad_eps).is_err());
        let minus = RationalMatrix::identity(12).scale(&q(-1));
        assert!(DoubleCoverModel::from_parts(3, minus, eps).is_err());
    }

    #[test]
    fn model_document_is_versioned() {
        let doc = model().to_json();
        assert_eq!(doc["version"], 1);
        assert_eq!(doc["cover_genus"], 6);
        assert_eq!(doc["sigma"][0][6], "1");
        assert_eq!(doc["epsilon"].as_array().unwrap().len(), 8);
    }
}
