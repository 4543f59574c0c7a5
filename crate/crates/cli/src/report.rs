//! Writing reports: tables as CSV or JSON, optional SVG heatmaps, and the
//! JSON summary that every command ends with.

use std::path::Path;

use harmonia::domain::DiskDomain;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{Common, Failure, Format};

pub struct Report<'a> {
    common: &'a Common,
    command: &'static str,
    files: Vec<String>,
}

impl<'a> Report<'a> {
    pub fn new(common: &'a Common, command: &'static str) -> Result<Self, Failure> {
        std::fs::create_dir_all(&common.out)
            .map_err(|e| Failure::Input(format!("cannot create {}: {e}", common.out.display())))?;
        Ok(Self { common, command, files: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.common.out.join(name);
        std::fs::write(&path, contents).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Writes a table given as CSV text, converting it to a JSON array of
    /// row objects under `--format json`.
    pub fn table(&mut self, stem: &str, csv_text: &str) -> Result<(), Failure> {
        match self.common.format {
            Format::Json => {
                let rows = csv_to_json(csv_text)?;
                self.write(&format!("{stem}.json"), &pretty(&rows)?)
            }
            Format::Csv | Format::Svg => self.write(&format!("{stem}.csv"), csv_text),
        }
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), Failure> {
        let v = serde_json::to_value(value).map_err(|e| Failure::Input(e.to_string()))?;
        self.write(name, &pretty(&v)?)
    }

    /// Heatmap of a grid field, written only under `--format svg`.
    pub fn heatmap(
        &mut self,
        stem: &str,
        domain: &DiskDomain,
        values: &[(Complex64, f64)],
        label: &str,
    ) -> Result<(), Failure> {
        if self.common.format == Format::Svg {
            self.write(&format!("{stem}.svg"), &heatmap_svg(domain, values, label))?;
        }
        Ok(())
    }

    /// Writes `summary.json`, then turns a failed status into exit code 1.
    pub fn finish(mut self, pass: bool, results: Value) -> Result<(), Failure> {
        let mut files = self.files.clone();
        files.push("summary.json".into());
        let summary = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.common.seed,
            "status": if pass { "pass" } else { "fail" },
            "files": files,
            "results": results,
        });
        self.write("summary.json", &pretty(&summary)?)?;
        if pass {
            Ok(())
        } else {
            Err(Failure::Property(format!(
                "{} reported a failed check; see {}",
                self.command,
                Path::new(&self.common.out).join("summary.json").display()
            )))
        }
    }
}

fn pretty(v: &Value) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Failure::Input(e.to_string()))
}

fn cell(field: &str) -> Value {
    if field.is_empty() {
        return Value::Null;
    }
    if let Ok(b) = field.parse::<bool>() {
        return Value::Bool(b);
    }
    if let Ok(i) = field.parse::<i64>() {
        return Value::from(i);
    }
    match field.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
        Some(n) => Value::Number(n),
        None => Value::String(field.to_string()),
    }
}

fn csv_to_json(text: &str) -> Result<Value, Failure> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Failure::Input(e.to_string()))?.clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Failure::Input(e.to_string()))?;
        let row: Map<String, Value> =
            headers.iter().zip(record.iter()).map(|(h, f)| (h.to_string(), cell(f))).collect();
        rows.push(Value::Object(row));
    }
    Ok(Value::Array(rows))
}

/// Quotes free-text fields as CSV.
pub fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Input(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Input(e.to_string()))
}

const PIXELS: f64 = 512.0;
/// Colour stops from low to high values.
const RAMP: [(f64, f64, f64); 3] = [(48.0, 18.0, 59.0), (32.0, 163.0, 134.0), (249.0, 231.0, 33.0)];

fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (RAMP.len() - 1) as f64;
    let i = (t.floor() as usize).min(RAMP.len() - 2);
    let f = t - i as f64;
    let (a, b) = (RAMP[i], RAMP[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn heatmap_svg(domain: &DiskDomain, values: &[(Complex64, f64)], label: &str) -> String {
    let finite: Vec<f64> = values.iter().map(|v| v.1).filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (c, r) = (domain.center(), domain.radius());
    let scale = PIXELS / (2.0 * r);
    let cell = domain.step() * scale;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = PIXELS,
        h = PIXELS + 24.0
    );
    for (z, v) in values {
        let x = (z.re - (c.re - r)) * scale - 0.5 * cell;
        // the imaginary axis points up
        let y = ((c.im + r) - z.im) * scale - 0.5 * cell;
        let fill = if v.is_finite() { colour((v - lo) / span) } else { "#808080".into() };
        out.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"{fill}\"/>\n"
        ));
    }
    out.push_str(&format!(
        "<text x=\"4\" y=\"{:.0}\" font-family=\"monospace\" font-size=\"13\">{label}: {lo:.4e} to {hi:.4e}</text>\n</svg>\n",
        PIXELS + 17.0
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells_become_typed_json() {
        let rows = csv_to_json("a,b,c,d\n1,2.5,true,x y\n,-3e-2,false,\"q,r\"\n").unwrap();
        assert_eq!(rows[0], json!({"a": 1, "b": 2.5, "c": true, "d": "x y"}));
        assert_eq!(rows[1], json!({"a": null, "b": -0.03, "c": false, "d": "q,r"}));
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(colour(0.0), "#30123b");
        assert_eq!(colour(1.0), "#f9e721");
        assert_eq!(colour(7.0), colour(1.0));
    }

    #[test]
    fn heatmap_has_one_cell_per_value() {
        let d = DiskDomain::unit(5);
        let values = vec![(Complex64::new(0.0, 0.0), 1.0), (Complex64::new(0.5, 0.0), f64::NAN)];
        let svg = heatmap_svg(&d, &values, "d");
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(svg.contains("#808080"));
    }

    #[test]
    fn free_text_is_quoted() {
        let t = csv_rows(&["id", "detail"], &[vec!["1".into(), "a, b; c".into()]]).unwrap();
        assert_eq!(t, "id,detail\n1,\"a, b; c\"\n");
    }
}
