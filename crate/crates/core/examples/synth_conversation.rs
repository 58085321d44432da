//! Generate a conversation, print its turn log, and save it in the dataset format.
//!
//! Run: cargo run --example synth_conversation [participants] [output.csv]

use std::fs::File;
use std::io::BufWriter;

use tempsal::io::{read_dataset, write_dataset};
use tempsal::{generate, ConversationConfig};

fn main() -> tempsal::Result<()> {
    let mut args = std::env::args().skip(1);
    let participants = args.next().map_or(4, |s| s.parse().expect("participant count"));
    let config = ConversationConfig { participants, ..Default::default() };
    let conv = generate(&config)?;

    println!("{} participants, {} frames", participants, conv.sequence.frame_count());
    for seat in &conv.seats {
        println!("  seat at ({:+.3}, {:+.3})", seat.position[0], seat.position[1]);
    }
    for (k, e) in conv.events.iter().enumerate() {
        println!(
            "  turn {:>2}: {} -> {} ({:?}) nod at {}, handover at {}",
            k + 1,
            e.speaker,
            e.next_speaker,
            e.direction,
            e.nod_onset_frame,
            e.handover_frame
        );
    }

    if let Some(path) = args.next() {
        write_dataset(&mut BufWriter::new(File::create(&path)?), &conv.sequence, Some(&config))?;
        let (_, back) = read_dataset(std::io::BufReader::new(File::open(&path)?))?;
        assert_eq!(back, conv.sequence);
        println!("wrote {path}");
    }
    Ok(())
}
