//! Flat records for printing classifications as TSV or JSON.

use serde::{Deserialize, Serialize};

use crate::classifier4::{golden_row4, Tfd4};
use crate::classifier6::{GoldenRow, Tfd};
use crate::error::{Error, Result};
use crate::rational::show;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub dim: u8,
    pub crit: Vec<i64>,
    pub components: Vec<String>,
    pub b2: i64,
    pub b_odd: i64,
    /// `c1^3` in dimension six, `c1^2` in dimension four.
    pub chern: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gromov_width: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hofer_zehnder: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_at_min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<String>,
}

const COLUMNS: [&str; 11] = [
    "label",
    "dim",
    "crit",
    "components",
    "b2",
    "b_odd",
    "chern",
    "gromov_width",
    "hofer_zehnder",
    "euler_at_min",
    "manifold",
];

fn multiple_of_u(n: i64) -> String {
    match n {
        0 => "0".into(),
        1 => "u".into(),
        -1 => "-u".into(),
        n => format!("{n}u"),
    }
}

impl ReportRow {
    pub fn from_tfd(t: &Tfd) -> Result<ReportRow> {
        let d = t
            .derived
            .as_ref()
            .ok_or_else(|| Error::InconsistentFixedPointData(format!("{t} has not been verified")))?;
        let (gw, hz) = match &d.capacities {
            Some((a, b)) => (Some(show(a)), Some(show(b))),
            None => (None, None),
        };
        Ok(ReportRow {
            label: t.label_or_default(),
            dim: 6,
            crit: t.levels(),
            components: t.component_summary(),
            b2: d.betti[2],
            b_odd: d.betti[1] + d.betti[3] + d.betti[5],
            chern: d.chern,
            gromov_width: gw,
            hofer_zehnder: hz,
            euler_at_min: None,
            manifold: None,
        })
    }

    /// The row as printed in the reference table. Levels and components come
    /// from the row's data; the numeric columns are the printed ones.
    pub fn from_golden(g: &GoldenRow) -> Result<ReportRow> {
        let t = Tfd::assemble(&g.blueprint().canonical())?;
        let (gw, hz) = g.capacities();
        Ok(ReportRow {
            label: g.label.into(),
            dim: 6,
            crit: t.levels(),
            components: t.component_summary(),
            b2: g.b2,
            b_odd: g.b3,
            chern: g.chern,
            gromov_width: Some(gw.to_string()),
            hofer_zehnder: Some(hz.to_string()),
            euler_at_min: None,
            manifold: None,
        })
    }

    pub fn from_tfd4(t: &Tfd4) -> ReportRow {
        let b = t.betti();
        let ext = |dim| if dim == 0 { "pt" } else { "S2" };
        let mut components = vec![format!("{}: {}", t.min.min_level(), ext(t.min.dim()))];
        if t.k > 0 {
            components.push(format!("0: {} pt", t.k));
        }
        components.push(format!("{}: {}", -t.max.min_level(), ext(t.max.dim())));
        ReportRow {
            label: t.label.clone().unwrap_or_else(|| "?".into()),
            dim: 4,
            crit: t.crit(),
            components,
            b2: b[2],
            b_odd: b[1] + b[3],
            chern: t.c1_squared(),
            gromov_width: None,
            hofer_zehnder: None,
            euler_at_min: Some(multiple_of_u(t.euler_at_min)),
            manifold: t.label.as_deref().and_then(golden_row4).map(|g| g.manifold.to_string()),
        }
    }

    fn cells(&self) -> [String; 11] {
        let crit: Vec<String> = self.crit.iter().map(|c| c.to_string()).collect();
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        [
            self.label.clone(),
            self.dim.to_string(),
            crit.join(","),
            self.components.join("; "),
            self.b2.to_string(),
            self.b_odd.to_string(),
            self.chern.to_string(),
            opt(&self.gromov_width),
            opt(&self.hofer_zehnder),
            opt(&self.euler_at_min),
            opt(&self.manifold),
        ]
    }
}

/// Header plus one line per row, LF terminated.
pub fn to_tsv(rows: &[ReportRow]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for r in rows {
        out.push_str(&r.cells().join("\t"));
        out.push('\n');
    }
    out
}

pub fn to_json(rows: &[ReportRow]) -> String {
    serde_json::to_string_pretty(rows).expect("report rows serialize") + "\n"
}

pub fn from_json(s: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(s).map_err(|e| Error::InvalidFixedComponent(format!("report json: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier4::classify4;
    use crate::classifier6::GOLDEN6;

    #[test]
    fn tsv_columns_align() {
        let mut rows: Vec<ReportRow> = GOLDEN6.iter().map(|g| ReportRow::from_golden(g).unwrap()).collect();
        rows.extend(classify4().unwrap().iter().map(ReportRow::from_tfd4));
        let tsv = to_tsv(&rows);
        assert!(tsv.lines().all(|l| l.split('\t').count() == COLUMNS.len()));
        assert_eq!(tsv.lines().count(), rows.len() + 1);
        let back = from_json(&to_json(&rows)).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn golden_row_text() {
        let r = ReportRow::from_golden(&GOLDEN6[2]).unwrap();
        assert_eq!(r.crit, vec![-3, -1, 0, 1, 3]);
        assert_eq!(r.components[2], "0: S2 [u - E1] + S2 [u - E1]");
        assert_eq!(r.gromov_width.as_deref(), Some("2"));
    }
}
