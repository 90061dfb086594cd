use serde::Serialize;

use genfac::{Instance, SizeProfile};

use crate::Format;

/// Output of every solver subcommand.
#[derive(Debug, Serialize)]
pub struct Report {
    pub n: usize,
    pub m: usize,
    pub counts: Vec<String>,
    pub decide: bool,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub mode: String,
    pub width: Option<usize>,
    pub wall_ms: f64,
}

impl Report {
    pub fn new(inst: &Instance, profile: &SizeProfile, mode: &str, width: Option<usize>, wall_ms: f64) -> Report {
        let summary = profile.summary();
        Report {
            n: inst.n(),
            m: inst.m(),
            counts: profile.to_decimal_strings(),
            decide: summary.decide,
            min: summary.min_size,
            max: summary.max_size,
            mode: mode.to_string(),
            width,
            wall_ms,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("report serializes"),
            Format::Tsv => {
                let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
                let mut out = format!(
                    "# n={} m={} mode={} width={} decide={} min={} max={} wall_ms={:.3}\nsize\tcount\n",
                    self.n,
                    self.m,
                    self.mode,
                    opt(self.width),
                    self.decide,
                    opt(self.min),
                    opt(self.max),
                    self.wall_ms
                );
                for (s, c) in self.counts.iter().enumerate() {
                    out.push_str(&format!("{s}\t{c}\n"));
                }
                out.pop();
                out
            }
        }
    }
}
