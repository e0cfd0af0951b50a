//! `H₁(S_g; Q)` as a symplectic space, with Dehn-twist transvections, the
//! free involution on the genus-3 surface, and point-push bookkeeping.
//!
//! Conventions: the basis is `a1, b1, …, ag, bg` with `i(aᵢ, bᵢ) = +1`, and
//! a twist acts by `T_x(c) = c + i(c, x)·x`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactq::{self, q, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymplecticSpace {
    genus: usize,
    labels: Vec<String>,
}

impl SymplecticSpace {
    /// Standard basis labels `a1, b1, …`.
    pub fn new(genus: usize) -> Arc<Self> {
        let labels = (1..=genus)
            .flat_map(|i| [format!("a{i}"), format!("b{i}")])
            .collect();
        Arc::new(SymplecticSpace { genus, labels })
    }

    /// Custom labels, listed as consecutive dual pairs.
    pub fn with_labels(genus: usize, labels: Vec<String>) -> Result<Arc<Self>> {
        if labels.len() != 2 * genus {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for genus {}",
                labels.len(),
                genus
            )));
        }
        Ok(Arc::new(SymplecticSpace { genus, labels }))
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The intersection matrix `J`, block diagonal with blocks `[[0, 1], [-1, 0]]`.
    pub fn form(&self) -> RationalMatrix {
        let mut j = RationalMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.genus {
            j.set(2 * i, 2 * i + 1, q(1));
            j.set(2 * i + 1, 2 * i, q(-1));
        }
        j
    }

    /// `uᵀJv` on raw coordinates.
    pub fn pairing(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.genus {
            let (a, b) = (2 * i, 2 * i + 1);
            if !u[a].is_zero() && !v[b].is_zero() {
                acc += &u[a] * &v[b];
            }
            if !u[b].is_zero() && !v[a].is_zero() {
                acc -= &u[b] * &v[a];
            }
        }
        acc
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A homology class in a particular [`SymplecticSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HClass {
    space: Arc<SymplecticSpace>,
    coords: Vec<Rational>,
}

impl HClass {
    pub fn new(space: &Arc<SymplecticSpace>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates in a space of dimension {}",
                coords.len(),
                space.dim()
            )));
        }
        Ok(HClass {
            space: Arc::clone(space),
            coords,
        })
    }

    pub fn from_i64(space: &Arc<SymplecticSpace>, coords: &[i64]) -> Result<Self> {
        HClass::new(space, exactq::qvec(coords))
    }

    pub fn zero(space: &Arc<SymplecticSpace>) -> Self {
        HClass {
            space: Arc::clone(space),
            coords: vec![Rational::zero(); space.dim()],
        }
    }

    pub fn basis(space: &Arc<SymplecticSpace>, index: usize) -> Self {
        let mut c = HClass::zero(space);
        c.coords[index] = Rational::one();
        c
    }

    pub fn by_label(space: &Arc<SymplecticSpace>, label: &str) -> Result<Self> {
        let i = space
            .label_index(label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))?;
        Ok(HClass::basis(space, i))
    }

    /// Parses linear combinations such as `a1 + 2 b2 - a3` or `1/2 a1 - b1`.
    pub fn parse(space: &Arc<SymplecticSpace>, text: &str) -> Result<Self> {
        let spaced = text.replace('+', " + ").replace('-', " - ").replace('*', " ");
        let mut out = HClass::zero(space);
        let mut sign = Rational::one();
        let mut coeff: Option<Rational> = None;
        let mut expect_term = true;
        for tok in spaced.split_whitespace() {
            match tok {
                "+" | "-" => {
                    if coeff.is_some() {
                        return Err(Error::Parse(format!("dangling coefficient before `{tok}`")));
                    }
                    if !expect_term {
                        sign = Rational::one();
                    }
                    if tok == "-" {
                        sign = -sign;
                    }
                    expect_term = true;
                }
                _ if tok.starts_with(|c: char| c.is_ascii_digit()) => {
                    if coeff.is_some() || !expect_term {
                        return Err(Error::Parse(format!("unexpected number `{tok}`")));
                    }
                    let value = Rational::from_str(tok)
                        .map_err(|_| Error::Parse(format!("bad coefficient `{tok}`")))?;
                    coeff = Some(value);
                }
                _ => {
                    if !expect_term {
                        return Err(Error::Parse(format!("missing operator before `{tok}`")));
                    }
                    let i = space
                        .label_index(tok)
                        .ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?;
                    let c = coeff.take().unwrap_or_else(Rational::one);
                    out.coords[i] += &sign * c;
                    sign = Rational::one();
                    expect_term = false;
                }
            }
        }
        if expect_term && !text.trim().is_empty() {
            return Err(Error::Parse(format!("incomplete expression `{text}`")));
        }
        Ok(out)
    }

    pub fn space(&self) -> &Arc<SymplecticSpace> {
        &self.space
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        exactq::is_zero_vec(&self.coords)
    }

    fn check_space(&self, other: &HClass) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "classes live in different spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &HClass) -> Result<HClass> {
        self.check_space(other)?;
        HClass::new(&self.space, exactq::add_vec(&self.coords, &other.coords))
    }

    pub fn try_sub(&self, other: &HClass) -> Result<HClass> {
        self.check_space(other)?;
        HClass::new(&self.space, exactq::sub_vec(&self.coords, &other.coords))
    }

    pub fn scale(&self, k: &Rational) -> HClass {
        HClass {
            space: Arc::clone(&self.space),
            coords: exactq::scale_vec(k, &self.coords),
        }
    }

    /// Integer coordinates, if every coordinate is integral.
    pub fn integral_coords(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (c, label) in self.coords.iter().zip(self.space.labels()) {
            if c.is_zero() {
                continue;
            }
            let term = if c.is_one() {
                label.clone()
            } else if *c == -Rational::one() {
                format!("-{label}")
            } else {
                format!("{c} {label}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

/// `i(x, y) = xᵀJy`.
pub fn intersection(x: &HClass, y: &HClass) -> Result<Rational> {
    x.check_space(y)?;
    Ok(x.space.pairing(&x.coords, &y.coords))
}

/// A linear automorphism of `H₁` that preserves the intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingAction {
    matrix: RationalMatrix,
    space: Arc<SymplecticSpace>,
    provenance: String,
}

impl MappingAction {
    /// Fails unless `MᵀJM = J`.
    pub fn new(
        space: &Arc<SymplecticSpace>,
        matrix: RationalMatrix,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let provenance = provenance.into();
        if matrix.rows() != space.dim() || !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on a space of dimension {}",
                matrix.rows(),
                matrix.cols(),
                space.dim()
            )));
        }
        let j = space.form();
        if &(&matrix.transpose() * &j) * &matrix != j {
            return Err(Error::NotSymplectic(provenance));
        }
        Ok(MappingAction {
            matrix,
            space: Arc::clone(space),
            provenance,
        })
    }

    pub fn identity(space: &Arc<SymplecticSpace>) -> Self {
        MappingAction {
            matrix: RationalMatrix::identity(space.dim()),
            space: Arc::clone(space),
            provenance: "id".into(),
        }
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn space(&self) -> &Arc<SymplecticSpace> {
        &self.space
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MappingAction) -> Result<MappingAction> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "actions on different spaces".into(),
            ));
        }
        MappingAction::new(
            &self.space,
            &self.matrix * &other.matrix,
            format!("{}·{}", self.provenance, other.provenance),
        )
    }

    /// Symplectic inverse `-J Mᵀ J`.
    pub fn inverse(&self) -> MappingAction {
        let j = self.space.form();
        let inv = -&(&(&j * &self.matrix.transpose()) * &j);
        MappingAction {
            matrix: inv,
            space: Arc::clone(&self.space),
            provenance: format!("({})⁻¹", self.provenance),
        }
    }

    pub fn apply(&self, c: &HClass) -> Result<HClass> {
        if c.space != self.space {
            return Err(Error::DimensionMismatch(
                "class and action live in different spaces".into(),
            ));
        }
        HClass::new(&self.space, self.matrix.mul_vec(&c.coords)?)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Dimension of the `λ`-eigenspace.
    pub fn eigenspace(&self, lambda: &Rational) -> exactq::Subspace {
        let shifted = &self.matrix - &RationalMatrix::identity(self.space.dim()).scale(lambda);
        exactq::kernel(&shifted)
    }
}

/// The matrix `I + k·x(Jx)ᵀ`, i.e. `c ↦ c + k·i(c, x)·x`, on raw coordinates.
pub fn transvection_matrix(space: &SymplecticSpace, x: &[Rational], k: &Rational) -> RationalMatrix {
    let n = space.dim();
    let jx = space.form().mul_vec(x).expect("coordinates match the space");
    let mut m = RationalMatrix::identity(n);
    for (r, xr) in x.iter().enumerate() {
        if xr.is_zero() {
            continue;
        }
        let xr = k * xr;
        for (c, jc) in jx.iter().enumerate() {
            // Column c picks up i(e_c, x) = (Jx)_c.
            if !jc.is_zero() {
                let v = m.get(r, c) + &xr * jc;
                m.set(r, c, v);
            }
        }
    }
    m
}

/// `T_x^n`, the symplectic transvection `c ↦ c + n·i(c, x)·x`.
pub fn twist(x: &HClass, power: i64) -> Result<MappingAction> {
    if x.is_zero() {
        return Err(Error::ZeroClass);
    }
    let m = transvection_matrix(&x.space, &x.coords, &q(power));
    MappingAction::new(&x.space, m, format!("T[{x}]^{power}"))
}

/// The free involution of the genus-3 surface on homology:
/// `a1 <-> a3`, `b1 <-> b3`, fixing `a2, b2`.
pub fn tau_involution(space: &Arc<SymplecticSpace>) -> Result<MappingAction> {
    if space.genus() != 3 {
        return Err(Error::WrongGenus {
            expected: 3,
            found: space.genus(),
        });
    }
    let perm = [4usize, 5, 2, 3, 0, 1];
    let mut m = RationalMatrix::zeros(6, 6);
    for (src, &dst) in perm.iter().enumerate() {
        m.set(dst, src, q(1));
    }
    MappingAction::new(space, m, "tau")
}

/// Homological data of a point push `Push(a) = T_x T_y⁻¹` on the surface
/// punctured at the branch points. The boundary curves `x`, `y` of the
/// pushing annulus are homologous to `a` on the closed surface and differ
/// by the loop around the pushed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushData {
    pub a: HClass,
    pub x: HClass,
    pub y: HClass,
    /// Coefficient of the loop around the pushed branch point in each curve.
    pub x_branch_loop: i64,
    pub y_branch_loop: i64,
    pub epsilon_x: u8,
    pub epsilon_y: u8,
}

impl PushData {
    /// `epsilon` is the mod-2 cover class on the closed basis and
    /// `epsilon_branch_loop` its value on the loop around the pushed point.
    pub fn new(a: &HClass, epsilon: &[u8], epsilon_branch_loop: u8) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroClass);
        }
        if epsilon.len() != a.space.dim() {
            return Err(Error::DimensionMismatch(
                "epsilon has the wrong length".into(),
            ));
        }
        let coords = a.integral_coords().ok_or_else(|| {
            Error::Precondition(format!("pushed class `{a}` must be integral"))
        })?;
        let eps_a = coords
            .iter()
            .zip(epsilon)
            .map(|(c, &e)| c.rem_euclid(2) * i64::from(e))
            .sum::<i64>()
            .rem_euclid(2) as u8;
        let epsilon_x = eps_a;
        let epsilon_y = (eps_a + epsilon_branch_loop) % 2;
        if (epsilon_x + epsilon_y) % 2 != 1 {
            return Err(Error::Precondition(
                "exactly one annulus boundary curve must cross the branch locus".into(),
            ));
        }
        Ok(PushData {
            a: a.clone(),
            x: a.clone(),
            y: a.clone(),
            x_branch_loop: 0,
            y_branch_loop: 1,
            epsilon_x,
            epsilon_y,
        })
    }

    /// `+1` when `x` is the curve lifting to two copies, `-1` when `y` is.
    pub fn lift_sign(&self) -> i64 {
        if self.epsilon_x == 0 {
            1
        } else {
            -1
        }
    }

    /// On the closed surface a point push acts trivially on homology.
    pub fn closed_surface_action(&self) -> MappingAction {
        MappingAction::identity(&self.a.space).with_provenance(format!("Push[{}]", self.a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(space: &Arc<SymplecticSpace>, s: &str) -> HClass {
        HClass::parse(space, s).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let s = SymplecticSpace::new(2);
        assert_eq!(intersection(&cls(&s, "a1"), &cls(&s, "b1")).unwrap(), q(1));
        assert_eq!(intersection(&cls(&s, "a1"), &cls(&s, "a2")).unwrap(), q(0));
        assert_eq!(
            intersection(&cls(&s, "a1 + b1"), &cls(&s, "a1 - b1")).unwrap(),
            q(-2)
        );
        let other = SymplecticSpace::new(3);
        assert!(intersection(&cls(&s, "a1"), &cls(&other, "a1")).is_err());
    }

    #[test]
    fn twist_examples() {
        let s = SymplecticSpace::new(1);
        let a1 = cls(&s, "a1");
        let b1 = cls(&s, "b1");
        let t = twist(&a1, 1).unwrap();
        // i(b1, a1) = -1 under the i(a, b) = +1 convention.
        assert_eq!(t.apply(&b1).unwrap(), cls(&s, "b1 - a1"));
        assert_eq!(twist(&a1, -1).unwrap().apply(&b1).unwrap(), cls(&s, "b1 + a1"));
        assert_eq!(t.apply(&a1).unwrap(), a1);
        assert_eq!(twist(&HClass::zero(&s), 1), Err(Error::ZeroClass));
    }

    #[test]
    fn twist_composition_matches_matrix_product() {
        let s = SymplecticSpace::new(1);
        let a1 = cls(&s, "a1");
        let b1 = cls(&s, "b1");
        let ta2 = twist(&a1, 2).unwrap();
        let tb_inv = twist(&b1, -1).unwrap();
        let composed = ta2.compose(&tb_inv).unwrap();
        let stepwise = ta2.apply(&tb_inv.apply(&a1).unwrap()).unwrap();
        assert_eq!(composed.apply(&a1).unwrap(), stepwise);
        // T_b^{-1}(a1) = a1 - i(a1, b1) b1 = a1 - b1; then T_a^2 adds 2 i(., a1) a1.
        assert_eq!(stepwise, cls(&s, "3 a1 - b1"));
    }

    #[test]
    fn tau_examples() {
        let s = SymplecticSpace::new(3);
        let tau = tau_involution(&s).unwrap();
        assert_eq!(tau.apply(&cls(&s, "a1")).unwrap(), cls(&s, "a3"));
        assert_eq!(tau.apply(&cls(&s, "b2")).unwrap(), cls(&s, "b2"));
        assert!(tau.compose(&tau).unwrap().is_identity());
        assert_eq!(tau.matrix().trace(), q(2));
        assert_eq!(tau.eigenspace(&q(1)).dim(), 4);
        assert_eq!(tau.eigenspace(&q(-1)).dim(), 2);
        assert!(matches!(
            tau_involution(&SymplecticSpace::new(2)),
            Err(Error::WrongGenus { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn non_symplectic_matrix_rejected() {
        let s = SymplecticSpace::new(1);
        let m = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(matches!(
            MappingAction::new(&s, m, "scale"),
            Err(Error::NotSymplectic(_))
        ));
    }

    #[test]
    fn class_parsing() {
        let s = SymplecticSpace::new(3);
        let c = cls(&s, "a1 + 2 b2 - a3");
        assert_eq!(c.coords(), exactq::qvec(&[1, 0, 0, 2, -1, 0]).as_slice());
        assert_eq!(cls(&s, "-a1 + 1/2 b1").coords()[1], exactq::frac(1, 2));
        assert_eq!(cls(&s, "2*a2").coords()[2], q(2));
        assert_eq!(c.to_string(), "a1 + 2 b2 - a3");
        assert!(HClass::parse(&s, "a1 +").is_err());
        assert!(HClass::parse(&s, "a1 b1").is_err());
        assert!(matches!(HClass::parse(&s, "a9"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn inverse_is_symplectic_inverse() {
        let s = SymplecticSpace::new(2);
        let t = twist(&cls(&s, "a1 + b2"), 3).unwrap();
        assert!(t.compose(&t.inverse()).unwrap().is_identity());
    }

    #[test]
    fn push_data_epsilon_split() {
        let s = SymplecticSpace::new(3);
        let eps = [0u8; 6];
        let p = PushData::new(&cls(&s, "a1"), &eps, 1).unwrap();
        assert_eq!(p.epsilon_x + p.epsilon_y, 1);
        assert_eq!(p.lift_sign(), 1);
        assert!(p.closed_surface_action().is_identity());
        assert!(PushData::new(&cls(&s, "a1"), &eps, 0).is_err());
        assert!(PushData::new(&cls(&s, "1/2 a1"), &eps, 1).is_err());
    }
}
