//! How many futures does the oracle see for each observed window?
//!
//! Run: cargo run --example oracle_matching

use tempsal::oracle::distinct_count;
use tempsal::window::slide_windows;
use tempsal::{generate, ConversationConfig, OracleForecaster, TimeWindow};

fn main() -> tempsal::Result<()> {
    let conv = generate(&ConversationConfig::default())?;
    let oracle = OracleForecaster::new(vec![conv.sequence.clone()])?;
    let t_fut = TimeWindow::new(183, 46)?;

    for w in slide_windows(TimeWindow::new(83, 100)?, 30, 1)?.iter().step_by(5) {
        let futures = oracle.match_futures(conv.sequence.window_features(w)?, *w, t_fut)?;
        println!(
            "observed {w}: {} matches, {} distinct futures",
            futures.len(),
            distinct_count(&futures)
        );
    }
    Ok(())
}
