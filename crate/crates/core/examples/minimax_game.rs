//! Exact zero-sum game solving with a certified value, checked against support enumeration.
//!
//! Run with `cargo run --example minimax_game`.

use listreg::learner::{certify, solve_game, solve_game_approx, support_enumeration_value, PayoffMatrix};
use listreg::model::exact_string;

fn main() -> listreg::Result<()> {
    // Rows are training examples, columns weak-learner subsequences; 1 marks a miss.
    let payoff = PayoffMatrix::new(vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 0], vec![1, 1, 0, 0]])?;
    let exact = solve_game(&payoff)?;
    println!("exact value {} with weights {}", exact_string(&exact.value), exact.to_json()["weights"]);
    println!("certificate {}", exact_string(&certify(&payoff, &exact.weights)));
    println!("support enumeration {}", exact_string(&support_enumeration_value(&payoff)?));
    let (approx, max_strategy) = solve_game_approx(&payoff)?;
    println!("floating-point solve certified at {}, column strategy {max_strategy:?}", exact_string(&approx.value));
    Ok(())
}
