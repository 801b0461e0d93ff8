use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use theta_core::beta_characters::{conductor_check, duality_check, BetaDatum, Side};
use theta_core::finite_quotient_lab::{d1_structure, double_coset_counts, r_odd_lemma};
use theta_core::{Error, FieldParams};

const BUDGET: u64 = 20_000_000;

#[test]
fn coset_table_p3() {
    let rep = double_coset_counts(&FieldParams::new(3, 8).unwrap(), 2, BUDGET).unwrap();
    assert_eq!(rep.counts, [3, 9, 3, 18, 9, 5]);
    assert!(rep.holds());
}

#[test]
fn d1_quotient_p7() {
    let rep = d1_structure(&FieldParams::new(7, 8).unwrap(), BUDGET).unwrap();
    assert_eq!(rep.order, 8);
    assert!(rep.holds());
}

#[test]
fn characters_and_duality_p3() {
    let f = FieldParams::new(3, 8).unwrap();
    for side in [Side::Sl2, Side::Quat] {
        let d = BetaDatum::standard(f, side, 1).unwrap();
        assert!(conductor_check(&d, BUDGET).unwrap().holds());
    }
    let d = BetaDatum::standard(f, Side::Sl2, 2).unwrap();
    assert!(duality_check(&f, 2, d.r, BUDGET).unwrap().holds());
}

#[test]
fn r_odd_needs_multiple_of_four() {
    let f = FieldParams::new(3, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(matches!(
        r_odd_lemma(&f, 3, 5, BUDGET, &mut rng),
        Err(Error::InvalidParams(_))
    ));
    assert!(matches!(
        r_odd_lemma(&f, 4, 5, 10, &mut rng),
        Err(Error::BudgetExceeded { .. })
    ));
}
