mod common;

use common::table_pairs;
use funcgauss_core::parametric::{chain_bayes_evaluator, ClosedFormRule};
use funcgauss_core::rn;
use funcgauss_core::simulate::RngSeed;
use funcgauss_core::Grid;

#[test]
fn closed_forms_equal_the_chain() {
    let grid = Grid::uniform(50).unwrap();
    for (name, m0, m1) in table_pairs() {
        let rule = ClosedFormRule::for_models(&m0, &m1).unwrap();
        let chain = chain_bayes_evaluator(&m0, &m1, grid).unwrap();
        let mut rng = RngSeed::new(5).rng();
        for i in 0..100 {
            let x = if i % 2 == 0 { m0.sample(grid, &mut rng) } else { m1.sample(grid, &mut rng) };
            let closed = rule.log_rn(&x);
            let general = chain.log_rn(&x).unwrap();
            assert!((closed - general).abs() < 1e-9 * (1.0 + closed.abs()), "{name}: {closed} vs {general}");
            if (rn::eta(general, 0.5) - 0.5).abs() > 1e-9 {
                assert_eq!(rule.decide(&x), rn::classify(general, 0.5), "{name}");
            }
        }
    }
}
