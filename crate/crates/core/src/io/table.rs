use crate::error::{Error, Result};
use crate::geometry::Point3;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::Schema { pointer: String::new(), message: format!("invalid CSV: {e}") };
        let header = r.headers().map_err(bad)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()).map_err(bad))
            .collect::<Result<_>>()?;
        Ok(CsvTable { header, rows })
    }

    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[k].parse().ok()).collect()
    }
}

/// Reads an OFF file. Polygons with more than three corners are split into
/// fans from their first corner.
pub fn parse_off(text: &str) -> Result<(Vec<Point3>, Vec<[usize; 3]>)> {
    let err = |line: usize, msg: String| Error::Schema { pointer: format!("line {line}"), message: msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("unexpected end of file reading {what}")));
    let (k, first) = next("the header")?;
    let counts_line = if first == "OFF" {
        next("the counts")?
    } else if let Some(rest) = first.strip_prefix("OFF") {
        (k, rest.trim())
    } else {
        return Err(err(k, "missing OFF header".into()));
    };
    let nums = |(k, l): (usize, &str)| -> Result<Vec<f64>> {
        l.split_whitespace().map(|t| t.parse::<f64>().map_err(|_| err(k, format!("not a number: {t}")))).collect()
    };
    let counts = nums(counts_line)?;
    if counts.len() < 2 || counts.iter().take(2).any(|c| *c < 0.0 || c.fract() != 0.0) {
        return Err(err(counts_line.0, "expected vertex and face counts".into()));
    }
    let (nv, nf) = (counts[0] as usize, counts[1] as usize);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = next("a vertex")?;
        let c = nums(line)?;
        if c.len() < 3 {
            return Err(err(line.0, "vertex needs 3 coordinates".into()));
        }
        vertices.push(Point3::new(c[0], c[1], c[2]));
    }
    let mut faces = Vec::new();
    for _ in 0..nf {
        let line = next("a face")?;
        let c = nums(line)?;
        let m = c.first().copied().unwrap_or(0.0) as usize;
        if m < 3 || c.len() < m + 1 {
            return Err(err(line.0, "face needs a corner count of at least 3 and that many indices".into()));
        }
        let idx: Vec<usize> = c[1..=m].iter().map(|&x| x as usize).collect();
        if let Some(&bad) = idx.iter().find(|&&i| i >= nv) {
            return Err(err(line.0, format!("index {bad} out of range")));
        }
        for t in 1..m - 1 {
            faces.push([idx[0], idx[t], idx[t + 1]]);
        }
    }
    Ok((vertices, faces))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = CsvTable::new(["i", "value"]);
        for (i, x) in [0.1, 1e-300, -2.5e17, 1.0 / 3.0].iter().enumerate() {
            t.push([i.to_string(), fmt_f64(*x)]);
        }
        let text = t.to_csv_string();
        assert!(text.starts_with("i,value\n"));
        let back = CsvTable::from_csv_str(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column_f64("value").unwrap(), vec![0.1, 1e-300, -2.5e17, 1.0 / 3.0]);
    }

    #[test]
    fn off_tetrahedron_and_square() {
        let text = "OFF\n# a pyramid\n5 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0.5 0.5 1\n4 0 3 2 1\n3 0 1 4\n";
        let (v, f) = parse_off(text).unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(f, vec![[0, 3, 2], [0, 2, 1], [0, 1, 4]]);
        assert!(parse_off("OFF\n1 1 0\n0 0 0\n3 0 0 9\n").is_err());
        assert!(parse_off("PLY\n").is_err());
    }
}
