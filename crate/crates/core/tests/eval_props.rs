mod common;

use common::*;
use permlogic::eval::{count_models, eval, eval_naive, models, Assignment, Compiled};
use permlogic::logic::Var;
use permlogic::{Permutation, Point};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cached_and_naive_evaluation_agree(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lang = if seed % 3 == 0 { Lang::Ob } else { Lang::To };
        let f = random_sentence(&mut rng, lang, 3, 12);
        let s = random_perm(&mut rng, n);
        let a = Assignment::new();
        prop_assert_eq!(eval(&s, &f, &a).unwrap(), eval_naive(&s, &f, &a).unwrap());
    }

    #[test]
    fn free_variables_follow_the_assignment(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, Lang::To, 2, &mut vec![Var::new("x"), Var::new("y")], 10);
        let s = random_perm(&mut rng, n);
        let c = Compiled::new(&f).unwrap();
        let params = c.params().to_vec();
        let mut sess = c.session(&s);
        for i in 1..=n {
            for j in 1..=n {
                let mut a = Assignment::new();
                let picks = [i, j];
                let mut positions = Vec::new();
                for (v, &q) in params.iter().zip(&picks) {
                    a.insert(v.clone(), Point::new(q, s.apply(q)));
                    positions.push(q);
                }
                let want = eval_naive(&s, &f, &a).unwrap();
                prop_assert_eq!(sess.eval_positions(&positions), want);
            }
        }
    }
}

#[test]
fn models_are_ordered_and_counted() {
    let f = permlogic::parse("E x . E y . (x <P y & y <V x)").unwrap();
    for n in 0..=6 {
        let ms = models(&f, n).unwrap();
        let want: Vec<Permutation> = all_perms(n).into_iter().filter(|s| !s.is_identity()).collect();
        assert_eq!(ms, want);
        assert_eq!(count_models(&f, n).unwrap(), want.len());
    }
}

#[test]
fn unbound_variables_are_reported() {
    let f = permlogic::parse("x <P y").unwrap();
    assert!(eval(&p("12"), &f, &Assignment::new()).is_err());
}
