use std::collections::HashSet;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-tetrahedron quad coefficients `(a_j, b_j, c_j)`.
pub type Triple = [i64; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRow {
    pub id: String,
    pub triples: Vec<Triple>,
}

/// A peripheral curve row. A boundary coefficient `w` on this curve adds
/// `w * scale * triples` to the quad weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralRow {
    pub label: String,
    pub scale: Ratio<i64>,
    pub triples: Vec<Triple>,
}

/// Validated gluing data of an ideal triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    n_tet: usize,
    edges: Vec<EdgeRow>,
    peripheral: Vec<PeripheralRow>,
    excluded: Vec<String>,
    k_generators: Vec<Vec<i64>>,
}

/// The bare gluing matrix: edge rows followed by peripheral rows, as printed
/// by a gluing-equations dump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingMatrix {
    pub n_tet: usize,
    pub edge_rows: Vec<Vec<Triple>>,
    pub peripheral_rows: Vec<Vec<Triple>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    id: String,
    triples: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PeripheralJson {
    label: String,
    scale: String,
    triples: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingJson {
    n_tet: usize,
    edges: Vec<EdgeJson>,
    peripheral: Vec<PeripheralJson>,
    excluded: Vec<String>,
    k_generators: Vec<Vec<i64>>,
}

fn violation(location: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::InvariantViolation { location: location.into(), msg: msg.into() }
}

fn scale_string(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GluingData {
    /// Checks every invariant of the gluing data.
    pub fn new(n_tet: usize, edges: Vec<EdgeRow>, peripheral: Vec<PeripheralRow>, excluded: Vec<String>, k_generators: Vec<Vec<i64>>) -> Result<Self> {
        if n_tet == 0 {
            return Err(violation("n_tet", "must be positive"));
        }
        if edges.len() != n_tet {
            return Err(violation("edges", format!("{} rows for {n_tet} tetrahedra", edges.len())));
        }
        let mut ids = HashSet::new();
        for (i, row) in edges.iter().enumerate() {
            if !ids.insert(row.id.as_str()) {
                return Err(violation(format!("edges[{i}]"), format!("duplicate id {}", row.id)));
            }
            if row.triples.len() != n_tet {
                return Err(violation(format!("edges[{i}]"), format!("{} triples for {n_tet} tetrahedra", row.triples.len())));
            }
            for (j, t) in row.triples.iter().enumerate() {
                if t.iter().any(|&x| x < 0) {
                    return Err(violation(format!("edges[{i}].triples[{j}]"), "negative incidence"));
                }
            }
        }
        for j in 0..n_tet {
            for (col, name) in ["a", "b", "c"].iter().enumerate() {
                let s: i64 = edges.iter().map(|r| r.triples[j][col]).sum();
                if s != 2 {
                    return Err(violation(format!("tetrahedron {} column {name}", j + 1), format!("edge incidences sum to {s}, expected 2")));
                }
            }
        }
        if peripheral.is_empty() || !peripheral.len().is_multiple_of(2) {
            return Err(violation("peripheral", format!("{} rows; expected a meridian and longitude per cusp", peripheral.len())));
        }
        let mut labels = HashSet::new();
        for (i, row) in peripheral.iter().enumerate() {
            if !labels.insert(row.label.as_str()) {
                return Err(violation(format!("peripheral[{i}]"), format!("duplicate label {}", row.label)));
            }
            if row.triples.len() != n_tet {
                return Err(violation(format!("peripheral[{i}]"), format!("{} triples for {n_tet} tetrahedra", row.triples.len())));
            }
            if *row.scale.numer() == 0 {
                return Err(violation(format!("peripheral[{i}].scale"), "must be nonzero"));
            }
        }
        let cusps = peripheral.len() / 2;
        if excluded.len() != cusps {
            return Err(violation("excluded", format!("{} edges for {cusps} cusps", excluded.len())));
        }
        let mut seen = HashSet::new();
        for (i, id) in excluded.iter().enumerate() {
            if !ids.contains(id.as_str()) || !seen.insert(id.as_str()) {
                return Err(violation(format!("excluded[{i}]"), format!("{id} is not a distinct edge id")));
            }
        }
        if k_generators.is_empty() {
            return Err(violation("k_generators", "empty"));
        }
        for (i, g) in k_generators.iter().enumerate() {
            if g.len() != peripheral.len() {
                return Err(violation(format!("k_generators[{i}]"), format!("length {} for {} peripheral curves", g.len(), peripheral.len())));
            }
        }
        Ok(GluingData { n_tet, edges, peripheral, excluded, k_generators })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: GluingJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let edges = raw.edges.into_iter().map(|e| EdgeRow { id: e.id, triples: e.triples }).collect();
        let peripheral = raw
            .peripheral
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let scale = p.scale.trim().parse::<Ratio<i64>>().map_err(|_| Error::Schema(format!("peripheral[{i}].scale: bad rational {:?}", p.scale)))?;
                Ok(PeripheralRow { label: p.label, scale, triples: p.triples })
            })
            .collect::<Result<_>>()?;
        GluingData::new(raw.n_tet, edges, peripheral, raw.excluded, raw.k_generators)
    }

    pub fn render_json(&self) -> String {
        let raw = GluingJson {
            n_tet: self.n_tet,
            edges: self.edges.iter().map(|e| EdgeJson { id: e.id.clone(), triples: e.triples.clone() }).collect(),
            peripheral: self
                .peripheral
                .iter()
                .map(|p| PeripheralJson { label: p.label.clone(), scale: scale_string(&p.scale), triples: p.triples.clone() })
                .collect(),
            excluded: self.excluded.clone(),
            k_generators: self.k_generators.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    /// The matrix rows alone.
    pub fn matrix(&self) -> GluingMatrix {
        GluingMatrix {
            n_tet: self.n_tet,
            edge_rows: self.edges.iter().map(|e| e.triples.clone()).collect(),
            peripheral_rows: self.peripheral.iter().map(|p| p.triples.clone()).collect(),
        }
    }

    /// The matrix in the bracketed text layout read by [`GluingMatrix::parse_text`].
    pub fn render_snappy(&self) -> String {
        self.matrix().render_text()
    }

    pub fn n_tet(&self) -> usize {
        self.n_tet
    }

    pub fn edges(&self) -> &[EdgeRow] {
        &self.edges
    }

    pub fn peripheral(&self) -> &[PeripheralRow] {
        &self.peripheral
    }

    pub fn excluded(&self) -> &[String] {
        &self.excluded
    }

    pub fn k_generators(&self) -> &[Vec<i64>] {
        &self.k_generators
    }

    pub fn is_excluded(&self, edge: usize) -> bool {
        self.excluded.contains(&self.edges[edge].id)
    }

    /// Whether `v` is an integer combination of the K generators.
    pub fn in_k(&self, v: &[i64]) -> bool {
        v.len() == self.peripheral.len() && lattice_contains(&self.k_generators, v)
    }
}

impl GluingMatrix {
    /// Reads rows of `3 n_tet` integers, one per line. Brackets, commas and a
    /// surrounding `matrix(...)` are ignored, as are blank lines and `#` comments.
    /// The first `n_tet` rows are edges; the rest are meridian and longitude
    /// rows, cusp by cusp.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("");
            let cleaned: String = body.replace("matrix", " ").chars().map(|c| if "[](),".contains(c) { ' ' } else { c }).collect();
            if cleaned.trim().is_empty() {
                continue;
            }
            let row = cleaned
                .split_whitespace()
                .map(|tok| tok.parse::<i64>().map_err(|_| Error::Parse { line: line_no, msg: format!("not an integer: {tok:?}") }))
                .collect::<Result<Vec<i64>>>()?;
            if let Some((_, first)) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::Parse { line: line_no, msg: format!("row has {} entries, expected {}", row.len(), first.len()) });
                }
            } else if row.len() % 3 != 0 {
                return Err(Error::Parse { line: line_no, msg: format!("row width {} is not a multiple of 3", row.len()) });
            }
            rows.push((line_no, row));
        }
        let last_line = text.lines().count().max(1);
        let Some((_, first)) = rows.first() else {
            return Err(Error::Parse { line: last_line, msg: "no rows".into() });
        };
        let n_tet = first.len() / 3;
        if n_tet == 0 {
            return Err(Error::Parse { line: rows[0].0, msg: "empty row".into() });
        }
        if rows.len() < n_tet {
            return Err(Error::Parse { line: last_line, msg: format!("{} rows, need at least {n_tet} edge rows", rows.len()) });
        }
        if !(rows.len() - n_tet).is_multiple_of(2) {
            return Err(Error::Parse { line: last_line, msg: "peripheral rows must come in meridian/longitude pairs".into() });
        }
        let triples = |r: &Vec<i64>| r.chunks(3).map(|c| [c[0], c[1], c[2]]).collect::<Vec<Triple>>();
        Ok(GluingMatrix {
            n_tet,
            edge_rows: rows[..n_tet].iter().map(|(_, r)| triples(r)).collect(),
            peripheral_rows: rows[n_tet..].iter().map(|(_, r)| triples(r)).collect(),
        })
    }

    pub fn render_text(&self) -> String {
        let rows: Vec<String> = self
            .edge_rows
            .iter()
            .chain(&self.peripheral_rows)
            .map(|r| {
                let cells: Vec<String> = r.iter().flatten().map(|x| format!("{x:2}")).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        rows.join("\n") + "\n"
    }

    /// Completes the matrix into full gluing data. Edges are named `e1, e2, ...`
    /// and peripheral rows `mu`, `lambda` (suffixed by the cusp number when
    /// there are several cusps).
    pub fn complete(self, scales: Vec<Ratio<i64>>, excluded: Vec<String>, k_generators: Vec<Vec<i64>>) -> Result<GluingData> {
        if scales.len() != self.peripheral_rows.len() {
            return Err(violation("scales", format!("{} scales for {} peripheral rows", scales.len(), self.peripheral_rows.len())));
        }
        let cusps = self.peripheral_rows.len() / 2;
        let edges = self.edge_rows.into_iter().enumerate().map(|(i, t)| EdgeRow { id: format!("e{}", i + 1), triples: t }).collect();
        let peripheral = self
            .peripheral_rows
            .into_iter()
            .zip(scales)
            .enumerate()
            .map(|(i, (t, scale))| {
                let base = if i % 2 == 0 { "mu" } else { "lambda" };
                let label = if cusps > 1 { format!("{base}{}", i / 2 + 1) } else { base.to_string() };
                PeripheralRow { label, scale, triples: t }
            })
            .collect();
        GluingData::new(self.n_tet, edges, peripheral, excluded, k_generators)
    }
}

/// Echelon basis of the integer span of `gens`, with pivot columns.
fn echelon(gens: &[Vec<i64>], n: usize) -> Vec<(Vec<i128>, usize)> {
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::new();
    for col in 0..n {
        // gcd-eliminate column `col` among the remaining rows
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nonzero.len() <= 1 {
                if let Some(&r) = nonzero.first() {
                    out.push((rows.swap_remove(r), col));
                }
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            let pivot = rows[p].clone();
            for &r in &nonzero {
                if r != p {
                    let f = Integer::div_floor(&rows[r][col], &pivot[col]);
                    for (x, d) in rows[r].iter_mut().zip(&pivot) {
                        *x -= f * d;
                    }
                }
            }
        }
    }
    out
}

/// A basis of the integer span of `gens`.
pub(crate) fn lattice_basis(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = gens.first().map_or(0, |g| g.len());
    echelon(gens, n).into_iter().map(|(r, _)| r.into_iter().map(|x| x as i64).collect()).collect()
}

/// Membership of `v` in the integer span of `gens`.
pub(crate) fn lattice_contains(gens: &[Vec<i64>], v: &[i64]) -> bool {
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for (row, col) in echelon(gens, v.len()) {
        let p = row[col];
        if w[col] % p != 0 {
            return false;
        }
        let f = w[col] / p;
        for (x, d) in w.iter_mut().zip(&row) {
            *x -= f * d;
        }
    }
    w.iter().all(|&x| x == 0)
}
