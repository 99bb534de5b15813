use std::io::{self, Write};

use super::CycleTrace;

/// One JSON object per kick event, one per line.
pub fn write_trace_jsonl<W: Write>(mut out: W, traces: &[CycleTrace]) -> io::Result<()> {
    for event in traces.iter().flat_map(|t| &t.events) {
        serde_json::to_writer(&mut out, event)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// `cycle_index,kicker,psi_1,…,psi_N` with the phases right after each kick.
pub fn write_trace_csv<W: Write>(out: W, traces: &[CycleTrace]) -> io::Result<()> {
    let n = traces.first().map_or(0, |t| t.start_state.n());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["cycle_index".to_string(), "kicker".to_string()];
    header.extend((1..=n).map(|i| format!("psi_{i}")));
    w.write_record(&header)?;
    for event in traces.iter().flat_map(|t| &t.events) {
        let mut row = vec![
            event.cycle_index.to_string(),
            event.kicking_clock.to_string(),
        ];
        row.extend(event.phases_after.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()
}
