use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use detpf::constructions::{cyclic_matrix, random_graded_matrix, ResolutionShape};
use detpf::mpoly::parse_form;
use detpf::polymat::{parse_graded_matrix, pfaffian_numeric, PolyConfig};
use detpf::{Field, HomogeneousForm, LinearSkewMatrix, ScalarMatrix};

fn gf() -> Field {
    Field::default_prime()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn form_text_round_trip(seed in any::<u64>(), nvars in 1usize..4, degree in 0i32..6) {
        let f = HomogeneousForm::random(gf(), nvars, degree, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_form(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn matrix_text_round_trip(seed in any::<u64>(), size in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_graded_matrix(gf(), 3, &ResolutionShape::linear(size), &mut rng).unwrap();
        prop_assert_eq!(parse_graded_matrix(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn product_evaluates_pointwise(seed in any::<u64>(), da in 0i32..4, db in 0i32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = HomogeneousForm::random(gf(), 3, da, &mut rng);
        let b = HomogeneousForm::random(gf(), 3, db, &mut rng);
        let pt = [gf().random(&mut rng), gf().random(&mut rng), gf().random(&mut rng)];
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.evaluate(&pt), gf().mul(a.evaluate(&pt), b.evaluate(&pt)));
    }

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), half in 1usize..7) {
        let a = ScalarMatrix::random_skew(gf(), 2 * half, &mut ChaCha8Rng::seed_from_u64(seed));
        let pf = pfaffian_numeric(&a).unwrap();
        prop_assert_eq!(gf().mul(pf, pf), a.determinant().unwrap());
    }

    #[test]
    fn cyclic_determinant_at_a_point(seed in any::<u64>(), l in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<_> = (0..l).map(|_| HomogeneousForm::random(gf(), 3, 1, &mut rng)).collect();
        let g: Vec<_> = (0..l).map(|_| HomogeneousForm::random(gf(), 3, 1, &mut rng)).collect();
        let m = cyclic_matrix(&f, &g).unwrap();
        let pt = [gf().random(&mut rng), gf().random(&mut rng), gf().random(&mut rng)];
        let prod = |v: &[HomogeneousForm]| v.iter().fold(1, |acc, h| gf().mul(acc, h.evaluate(&pt)));
        let sign = if l % 2 == 1 { 1 } else { gf().neg(1) };
        let expected = gf().add(prod(&f), gf().mul(sign, prod(&g)));
        prop_assert_eq!(m.evaluate(&pt).determinant().unwrap(), expected);
    }
}

#[test]
fn skew_pencil_hash_is_stable() {
    let a = LinearSkewMatrix::random(gf(), 6, 3, &mut ChaCha8Rng::seed_from_u64(4));
    let b = LinearSkewMatrix::random(gf(), 6, 3, &mut ChaCha8Rng::seed_from_u64(4));
    assert_eq!(a.content_hash(), b.content_hash());
    let c = LinearSkewMatrix::random(gf(), 6, 3, &mut ChaCha8Rng::seed_from_u64(5));
    assert_ne!(a.content_hash(), c.content_hash());
}

#[test]
fn graded_and_linear_views_agree() {
    let a = LinearSkewMatrix::random(gf(), 6, 4, &mut ChaCha8Rng::seed_from_u64(2));
    let g = a.to_graded();
    assert_eq!(LinearSkewMatrix::from_graded(&g).unwrap(), a);
    let pf = g.pfaffian(&PolyConfig::default()).unwrap();
    assert_eq!(pf.degree(), 3);
}
