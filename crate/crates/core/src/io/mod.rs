//! Serializable reports, plain-text tables and SVG phase portraits.

mod reports;
pub mod svg;
mod table;

pub use reports::{
    andronov_table, fixed_point_report, random_starts, simulation_report, verify_report,
    AndronovRow, ClassCounts, ConnectionSummary, FixedPointReport, SimulationReport, SimulationRun,
    VerifyReport,
};
pub use svg::{
    render_portrait, Layer, LayerStyle, PortraitData, PortraitError, PortraitSpec, Styling,
};
pub use table::{
    andronov_text_table, fixed_point_text_table, segment_text_table, simulation_text_table,
};

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}
