//! Find the moment that makes a turn change predictable.
//!
//! Generates the synthetic conversation, fixes the future window on the
//! first turn handover (frames 183..=228), slides a 30-frame observed window
//! over the 100 frames before it, and asks the perfect-model oracle how
//! uncertain the future is from each window. The entropy collapses once the
//! nod starting at frame 138 becomes visible, and the saliency peaks there.
//!
//! Run: cargo run --example nod_saliency

use tempsal::{
    generate, run_pipeline, ConversationConfig, DerivativeScheme, OracleForecaster,
    SaliencyConfig, TimeWindow,
};

fn main() -> tempsal::Result<()> {
    let conv = generate(&ConversationConfig::default())?;
    let turn = conv.events[0];
    println!(
        "turn 1: speaker {} -> {}, nod onset {}, handover {}",
        turn.speaker, turn.next_speaker, turn.nod_onset_frame, turn.handover_frame
    );

    let oracle = OracleForecaster::new(vec![conv.sequence.clone()])?;
    let t_fut = TimeWindow::new(turn.handover_frame, 46)?;

    for scheme in [DerivativeScheme::Central, DerivativeScheme::Forward] {
        let mut config = SaliencyConfig::looking_back(t_fut, 100, 30, 1)?;
        config.scheme = scheme;
        let map = run_pipeline(&oracle, &conv.sequence, &config)?;
        let peak = map.argmax().expect("non-empty map");
        let start = map.window_starts[peak];
        println!(
            "\n{} differences: peak saliency {:.4e} at window [{}, {}]",
            scheme.as_str(),
            map.saliency[peak],
            start,
            start + 29
        );
        if scheme == DerivativeScheme::Central {
            let means = map.phi_mean().expect("uniform future dimension");
            println!("{:>6} {:>6} {:>14} {:>12} {:>14}", "start", "end", "phi", "phi/dim", "saliency");
            for j in (0..map.len()).filter(|j| (20..36).contains(j) || j % 10 == 0) {
                println!(
                    "{:>6} {:>6} {:>14.4} {:>12.4} {:>14.4e}",
                    map.window_starts[j],
                    map.window_starts[j] + 29,
                    map.phi[j],
                    means[j],
                    map.saliency[j]
                );
            }
        }
    }
    Ok(())
}
