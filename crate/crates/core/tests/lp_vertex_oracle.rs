mod common;

use codebounds::lp::{solve, LpStatus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0.. {
        if optimal == 300 {
            break;
        }
        let lp = common::random_boxed_lp(&mut rng);
        let sol = solve(&lp).unwrap();
        match (common::vertex_max(&lp), sol.status) {
            (Some(v), LpStatus::Optimal) => {
                assert_eq!(sol.value.as_ref(), Some(&v), "case {case}: {}", lp.to_json());
                sol.certificate.unwrap().verify(&lp, &v).unwrap();
                optimal += 1;
            }
            (None, LpStatus::Infeasible) => infeasible += 1,
            (oracle, status) => panic!("case {case}: oracle {oracle:?}, solver {status:?}\n{}", lp.to_json()),
        }
    }
    assert!(infeasible > 0);
}
