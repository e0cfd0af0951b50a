//! Property tests for the invariants of each module.

use proptest::prelude::*;

use fibering::akcert::{invariant_subspace, GeneratorSelection};
use fibering::branchedcover::{DoubleCoverModel, LiftVariant, Sign};
use fibering::coverbundle::{cover_h1_data, product_presentation, ProductCoverSpec};
use fibering::exactq::{
    frac, kernel, q, rank, scale_vec, solve, Rational, RationalMatrix, Subspace,
};
use fibering::homology::{intersection, tau_involution, twist, HClass, SymplecticSpace};
use fibering::prodring::{KunnethRing, PuncturedProductRing};
use fibering::salter::MSSpace;
use fibering::surfgroup::{
    abelianized_rank, reidemeister_schreier, riemann_hurwitz_genus, FiniteGroup, FiniteQuotient,
    SurfacePresentation, Word,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(vector(cols), rows).prop_map(|r| RationalMatrix::from_rows(r).unwrap())
}

fn int_vector(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in matrix(4, 6)) {
        prop_assert_eq!(rank(&m) + kernel(&m).dim(), 6);
        for v in kernel(&m).basis() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn rref_is_idempotent(m in matrix(5, 4)) {
        let (r, pivots) = m.rref();
        let (r2, pivots2) = r.rref();
        prop_assert_eq!(r, r2);
        prop_assert_eq!(pivots, pivots2);
    }

    #[test]
    fn intersection_and_sum_dimensions(a in prop::collection::vec(vector(5), 1..4), b in prop::collection::vec(vector(5), 1..4)) {
        let u = Subspace::span(5, &a).unwrap();
        let v = Subspace::span(5, &b).unwrap();
        let i = u.intersect(&v).unwrap();
        let s = u.sum(&v).unwrap();
        prop_assert!(i.is_subspace_of(&u) && i.is_subspace_of(&v));
        prop_assert_eq!(u.dim() + v.dim(), s.dim() + i.dim());
        prop_assert_eq!(u.annihilator().dim(), 5 - u.dim());
    }

    #[test]
    fn solve_finds_consistent_solutions(m in matrix(4, 4), x in vector(4)) {
        let b = m.mul_vec(&x).unwrap();
        let y = solve(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn word_inverse_cancels(letters in prop::collection::vec(prop_oneof![1i32..=4, -4i32..=-1], 0..12)) {
        let w = Word(letters);
        prop_assert!(w.concat(&w.inverse()).is_empty());
        let sums = w.concat(&w).exponent_sums(4);
        prop_assert_eq!(sums, w.exponent_sums(4).iter().map(|s| 2 * s).collect::<Vec<_>>());
    }

    #[test]
    fn cyclic_covers_of_genus_two(n in 1usize..=5, images in prop::collection::vec(0usize..5, 4)) {
        let pres = SurfacePresentation::closed(2);
        let images: Vec<usize> = images.iter().map(|i| i % n).collect();
        let quotient = FiniteQuotient::new(&pres.presentation, FiniteGroup::cyclic(n), images).unwrap();
        prop_assume!(quotient.is_surjective());
        let sub = reidemeister_schreier(&pres, &quotient).unwrap();
        prop_assert_eq!(sub.generator_count(), n * 3 + 1);
        let genus = riemann_hurwitz_genus(2, n, &[]).unwrap();
        prop_assert_eq!(abelianized_rank(&sub), 2 * genus);
    }

    #[test]
    fn intersection_is_antisymmetric(x in int_vector(6), y in int_vector(6)) {
        let s = SymplecticSpace::new(3);
        let (x, y) = (HClass::from_i64(&s, &x).unwrap(), HClass::from_i64(&s, &y).unwrap());
        prop_assert_eq!(intersection(&x, &y).unwrap(), -intersection(&y, &x).unwrap());
    }

    #[test]
    fn twists_are_symplectic_and_invertible(x in int_vector(6), c in int_vector(6), n in -3i64..=3) {
        let s = SymplecticSpace::new(3);
        let x = HClass::from_i64(&s, &x).unwrap();
        prop_assume!(!x.is_zero());
        let t = twist(&x, n).unwrap();
        let j = s.form();
        prop_assert_eq!(&(&t.matrix().transpose() * &j) * t.matrix(), j);
        prop_assert!(t.compose(&twist(&x, -n).unwrap()).unwrap().is_identity());
        let c = HClass::from_i64(&s, &c).unwrap();
        let expected = c.try_add(&x.scale(&(intersection(&c, &x).unwrap() * q(n)))).unwrap();
        prop_assert_eq!(t.apply(&c).unwrap(), expected);
    }

    #[test]
    fn tau_preserves_intersections(x in int_vector(6), y in int_vector(6)) {
        let s = SymplecticSpace::new(3);
        let tau = tau_involution(&s).unwrap();
        let (x, y) = (HClass::from_i64(&s, &x).unwrap(), HClass::from_i64(&s, &y).unwrap());
        prop_assert_eq!(
            intersection(&tau.apply(&x).unwrap(), &tau.apply(&y).unwrap()).unwrap(),
            intersection(&x, &y).unwrap()
        );
    }

    #[test]
    fn lifted_pushes_fix_plus_space(g in int_vector(6), sign in any::<bool>()) {
        let m = DoubleCoverModel::standard();
        let gamma = HClass::from_i64(m.base(), &g).unwrap();
        let sign = if sign { Sign::Plus } else { Sign::Minus };
        let lp = m.lifted_push_squared(&gamma, LiftVariant::new(sign, false)).unwrap();
        for b in m.plus_space().basis() {
            let c = HClass::new(m.cover(), b.clone()).unwrap();
            prop_assert_eq!(lp.apply(&c).unwrap(), c);
        }
        if sign == Sign::Plus {
            let via = m.lifted_push_squared_via_twists(&gamma).unwrap();
            prop_assert_eq!(via.matrix(), lp.matrix());
        }
    }

    #[test]
    fn transfer_maps(x in int_vector(6), y in int_vector(6)) {
        let m = DoubleCoverModel::standard();
        let (x, y) = (HClass::from_i64(m.base(), &x).unwrap(), HClass::from_i64(m.base(), &y).unwrap());
        let (ux, uy) = (m.transfer_up(&x).unwrap(), m.transfer_up(&y).unwrap());
        prop_assert_eq!(m.transfer_down(&ux).unwrap(), x.scale(&q(2)));
        prop_assert_eq!(intersection(&ux, &uy).unwrap(), intersection(&x, &y).unwrap() * q(2));
        let d = m.lift_difference(&y).unwrap();
        prop_assert_eq!(intersection(&ux, &d).unwrap(), q(0));
    }

    #[test]
    fn cup1_is_bilinear_and_anticommutative(x in vector(8), y in vector(8), z in vector(8), k in rational()) {
        let r = KunnethRing::new(2, 2).unwrap();
        let xy = r.cup1(&x, &y).unwrap();
        prop_assert_eq!(&xy, &scale_vec(&q(-1), &r.cup1(&y, &x).unwrap()));
        prop_assert!(r.cup1(&x, &x).unwrap().iter().all(|c| *c == q(0)));
        let sum: Vec<Rational> = y.iter().zip(&z).map(|(a, b)| a + b * &k).collect();
        let lhs = r.cup1(&x, &sum).unwrap();
        let xz = r.cup1(&x, &z).unwrap();
        let rhs: Vec<Rational> = xy.iter().zip(&xz).map(|(a, b)| a + b * &k).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn punctured_cup_is_anticommutative(x in vector(8), y in vector(8)) {
        let p = PuncturedProductRing::new(2).unwrap();
        prop_assert_eq!(
            p.punctured_cup(&x, &y).unwrap(),
            scale_vec(&q(-1), &p.punctured_cup(&y, &x).unwrap())
        );
    }

    #[test]
    fn salter_pullback_cup_is_the_form(pattern in 0usize..4, x in vector(4), y in vector(4)) {
        let s = MSSpace::new(2).unwrap();
        let p = fibering::salter::PULLBACK_PATTERNS[pattern];
        let lift = |c: &[Rational]| -> Vec<Rational> { p.iter().flat_map(|&k| scale_vec(&q(k), c)).collect() };
        let (u, v) = (lift(&x), lift(&y));
        prop_assert!(s.pullbacks()[pattern].contains(&u));
        let base = SymplecticSpace::new(2);
        prop_assert_eq!(s.cup_is_zero(&u, &v).unwrap(), base.pairing(&x, &y) == q(0));
    }
}

const WORD_POOL: [&str; 10] = [
    "a1 a1", "a2 a2", "a3 a3", "b1 b1", "b2 b2", "b3 b3",
    "b2 a1 b2 a1", "b2 a3 b2 a3", "b2 b1 b2 b1", "a1 b1 a1 b1",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariant_subspace_monotone_and_sign_free(mask in 1u16..(1 << WORD_POOL.len()), extra in 0usize..WORD_POOL.len()) {
        let m = DoubleCoverModel::standard();
        let words: Vec<&str> = (0..WORD_POOL.len()).filter(|i| mask >> i & 1 == 1).map(|i| WORD_POOL[i]).collect();
        let sel = GeneratorSelection::parse(&words, &m).unwrap();
        let v = invariant_subspace(&sel, &m).unwrap();
        prop_assert!(m.plus_space().is_subspace_of(&v));
        let flipped = sel.clone().with_variant(LiftVariant::new(Sign::Minus, false));
        prop_assert_eq!(&invariant_subspace(&flipped, &m).unwrap(), &v);
        let mut bigger = words.clone();
        bigger.push(WORD_POOL[extra]);
        let w = invariant_subspace(&GeneratorSelection::parse(&bigger, &m).unwrap(), &m).unwrap();
        prop_assert!(w.is_subspace_of(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cover_h1_decomposes(images in prop::collection::vec(0usize..4, 8)) {
        let pres = product_presentation(2, 2);
        let quotient = FiniteQuotient::new(&pres, FiniteGroup::elementary_abelian_2(2), images.clone()).unwrap();
        prop_assume!(quotient.is_surjective());
        let spec = ProductCoverSpec::new(2, 2, FiniteGroup::elementary_abelian_2(2), images).unwrap();
        let data = cover_h1_data(&spec).unwrap();
        prop_assert_eq!(data.b1_total, data.b1_im1 + data.b1_im2);
    }
}
