//! Verification reports: a line-oriented key-value rendering (the
//! machine-readable artifact) and a text table carrying the same facts.
//!
//! Schema (one `key value` pair per line, written in this order):
//!
//! ```text
//! splv-report 1
//! name <spl-or-feature-name>
//! kind spl|feature
//! features <count>
//! feature.<i>.name <feature>
//! feature.<i>.design_variants <n>
//! feature.<i>.requirement_variants <n>
//! feature.<i>.mapping_pairs <n>
//! feature.<i>.failing <count>
//! feature.<i>.failing.<j> <configuration>
//! feature.<i>.time_ms <n>
//! spl.mode qbf|monolithic|enumerate        (spl reports only)
//! spl.verdict conforms|non_conforming|feature_non_conforming
//! spl.witness <configuration>              (only when non-conforming)
//! spl.refinements <n>
//! spl.clauses <n>
//! spl.time_ms <n>
//! total_time_ms <n>
//! ```
//!
//! Configurations are rendered `var=value,...` without spaces.

use crate::error::ParseError;
use crate::spl::SplOutcome;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRow {
    pub name: String,
    pub design_variants: usize,
    pub requirement_variants: usize,
    pub mapping_pairs: usize,
    pub failing: Vec<String>,
    pub time_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplSection {
    pub mode: String,
    pub verdict: String,
    pub witness: Option<String>,
    pub refinements: u64,
    pub clauses: usize,
    pub time_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub kind: String,
    pub features: Vec<FeatureRow>,
    pub spl: Option<SplSection>,
    pub total_time_ms: u128,
}

impl Report {
    /// Builds the report rows from a finished SPL check. `design_scope`
    /// (the composite design scope) fixes the witness rendering order.
    pub fn from_outcome(
        outcome: &SplOutcome,
        design_scope: Option<&crate::varlang::VarScope>,
    ) -> Report {
        let features = outcome
            .features
            .iter()
            .map(|f| FeatureRow {
                name: f.name.clone(),
                design_variants: f.mapping.design_variants(),
                requirement_variants: f.mapping.requirement_variants,
                mapping_pairs: f.mapping.pair_count(),
                failing: f
                    .mapping
                    .failing()
                    .iter()
                    .map(|c| c.render(&f.mapping.design_scope))
                    .collect(),
                time_ms: f.time_ms,
            })
            .collect();
        let spl = match &outcome.spl {
            None => Some(SplSection {
                mode: outcome.mode.as_str().into(),
                verdict: "feature_non_conforming".into(),
                witness: None,
                refinements: 0,
                clauses: 0,
                time_ms: 0,
            }),
            Some(level) => Some(SplSection {
                mode: outcome.mode.as_str().into(),
                verdict: if level.verdict.conforms {
                    if outcome.failing_features.is_empty() {
                        "conforms".into()
                    } else {
                        "feature_non_conforming".into()
                    }
                } else {
                    "non_conforming".into()
                },
                witness: level.verdict.witness.as_ref().map(|w| match design_scope {
                    Some(scope) => w.render(scope),
                    None => {
                        w.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
                    }
                }),
                refinements: level.stats.refinements,
                clauses: level.stats.clauses,
                time_ms: level.time_ms,
            }),
        };
        Report {
            name: outcome.manifest_name.clone(),
            kind: "spl".into(),
            features,
            spl,
            total_time_ms: outcome.total_time_ms,
        }
    }

    /// Machine-readable rendering.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        out.push_str("splv-report 1\n");
        out.push_str(&format!("name {}\n", self.name));
        out.push_str(&format!("kind {}\n", self.kind));
        out.push_str(&format!("features {}\n", self.features.len()));
        for (i, f) in self.features.iter().enumerate() {
            out.push_str(&format!("feature.{i}.name {}\n", f.name));
            out.push_str(&format!("feature.{i}.design_variants {}\n", f.design_variants));
            out.push_str(&format!(
                "feature.{i}.requirement_variants {}\n",
                f.requirement_variants
            ));
            out.push_str(&format!("feature.{i}.mapping_pairs {}\n", f.mapping_pairs));
            out.push_str(&format!("feature.{i}.failing {}\n", f.failing.len()));
            for (j, cfg) in f.failing.iter().enumerate() {
                out.push_str(&format!("feature.{i}.failing.{j} {cfg}\n"));
            }
            out.push_str(&format!("feature.{i}.time_ms {}\n", f.time_ms));
        }
        if let Some(spl) = &self.spl {
            out.push_str(&format!("spl.mode {}\n", spl.mode));
            out.push_str(&format!("spl.verdict {}\n", spl.verdict));
            if let Some(w) = &spl.witness {
                out.push_str(&format!("spl.witness {w}\n"));
            }
            out.push_str(&format!("spl.refinements {}\n", spl.refinements));
            out.push_str(&format!("spl.clauses {}\n", spl.clauses));
            out.push_str(&format!("spl.time_ms {}\n", spl.time_ms));
        }
        out.push_str(&format!("total_time_ms {}\n", self.total_time_ms));
        out
    }

    /// Parses the key-value rendering back.
    pub fn from_kv(text: &str) -> Result<Report, ParseError> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l.trim()).unwrap_or("");
        if header != "splv-report 1" {
            return Err(ParseError::new(1, 1, "expected `splv-report 1` header"));
        }
        let mut report = Report {
            name: String::new(),
            kind: String::new(),
            features: Vec::new(),
            spl: None,
            total_time_ms: 0,
        };
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| ParseError::new(lineno, 1, "expected `key value`"))?;
            let parse_num = |v: &str| -> Result<u128, ParseError> {
                v.parse().map_err(|_| ParseError::new(lineno, 1, format!("bad number `{v}`")))
            };
            if let Some(rest) = key.strip_prefix("feature.") {
                let (index, field) = rest
                    .split_once('.')
                    .ok_or_else(|| ParseError::new(lineno, 1, "bad feature key"))?;
                let index: usize = index
                    .parse()
                    .map_err(|_| ParseError::new(lineno, 1, "bad feature index"))?;
                while report.features.len() <= index {
                    report.features.push(FeatureRow {
                        name: String::new(),
                        design_variants: 0,
                        requirement_variants: 0,
                        mapping_pairs: 0,
                        failing: Vec::new(),
                        time_ms: 0,
                    });
                }
                let row = &mut report.features[index];
                match field {
                    "name" => row.name = value.into(),
                    "design_variants" => row.design_variants = parse_num(value)? as usize,
                    "requirement_variants" => {
                        row.requirement_variants = parse_num(value)? as usize
                    }
                    "mapping_pairs" => row.mapping_pairs = parse_num(value)? as usize,
                    "failing" => {}
                    "time_ms" => row.time_ms = parse_num(value)?,
                    other if other.starts_with("failing.") => row.failing.push(value.into()),
                    other => {
                        return Err(ParseError::new(
                            lineno,
                            1,
                            format!("unknown feature field `{other}`"),
                        ))
                    }
                }
                continue;
            }
            if let Some(field) = key.strip_prefix("spl.") {
                let spl = report.spl.get_or_insert_with(|| SplSection {
                    mode: String::new(),
                    verdict: String::new(),
                    witness: None,
                    refinements: 0,
                    clauses: 0,
                    time_ms: 0,
                });
                match field {
                    "mode" => spl.mode = value.into(),
                    "verdict" => spl.verdict = value.into(),
                    "witness" => spl.witness = Some(value.into()),
                    "refinements" => spl.refinements = parse_num(value)? as u64,
                    "clauses" => spl.clauses = parse_num(value)? as usize,
                    "time_ms" => spl.time_ms = parse_num(value)?,
                    other => {
                        return Err(ParseError::new(
                            lineno,
                            1,
                            format!("unknown spl field `{other}`"),
                        ))
                    }
                }
                continue;
            }
            match key {
                "name" => report.name = value.into(),
                "kind" => report.kind = value.into(),
                "features" => {}
                "total_time_ms" => report.total_time_ms = parse_num(value)?,
                other => {
                    return Err(ParseError::new(lineno, 1, format!("unknown key `{other}`")))
                }
            }
        }
        Ok(report)
    }

    /// Human-readable table with one row per feature and an SPL summary
    /// row; same facts as the key-value rendering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} `{}`\n", self.kind.to_uppercase(), self.name));
        let header = format!(
            "{:<28} {:>15} {:>12} {:>7} {:>8} {:>9}\n",
            "Feature", "Design Variants", "Req Variants", "Pairs", "Failing", "Time(ms)"
        );
        out.push_str(&header);
        out.push_str(&"-".repeat(header.len() - 1));
        out.push('\n');
        for f in &self.features {
            out.push_str(&format!(
                "{:<28} {:>15} {:>12} {:>7} {:>8} {:>9}\n",
                f.name,
                f.design_variants,
                f.requirement_variants,
                f.mapping_pairs,
                f.failing.len(),
                f.time_ms
            ));
            for cfg in &f.failing {
                out.push_str(&format!("    failing: {cfg}\n"));
            }
        }
        if let Some(spl) = &self.spl {
            out.push_str(&format!(
                "SPL ({}): {} refinements={} clauses={} time_ms={}\n",
                spl.mode, spl.verdict, spl.refinements, spl.clauses, spl.time_ms
            ));
            if let Some(w) = &spl.witness {
                out.push_str(&format!("    witness: {w}\n"));
            }
        }
        out.push_str(&format!("total_time_ms {}\n", self.total_time_ms));
        out
    }
}
