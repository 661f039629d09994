//! Rectangular result tables with per-column provenance notes,
//! serialized as RFC-4180 CSV.

use std::io::Write;

/// One table cell. Undefined entries are `Empty` (serialized as an
/// empty field) rather than NaN; any column that can be empty is
/// accompanied by a 0/1 flag column saying whether the value is
/// trustworthy.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Integer value (indices, flags).
    Int(i64),
    /// Finite real value.
    Float(f64),
    /// Free text (check names, statuses).
    Text(String),
    /// Deliberately absent value.
    Empty,
}

impl Cell {
    /// 0/1 flag cell.
    pub fn flag(ok: bool) -> Self {
        Cell::Int(i64::from(ok))
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // Shortest round-trip decimal form: deterministic and
            // parseable back to the identical bits.
            Cell::Float(v) => format!("{v}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// A named column together with a note identifying what produced its
/// values (closed form, simulation, echo of input, ...). The notes are
/// copied into the run manifest.
#[derive(Debug, Clone)]
pub struct Column {
    /// Header name.
    pub name: String,
    /// Provenance note.
    pub note: String,
}

/// Rectangular table of cells.
#[derive(Debug, Clone)]
pub struct ResultTable {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    /// Creates an empty table from `(name, provenance note)` pairs.
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self {
            columns: columns
                .iter()
                .map(|(name, note)| Column {
                    name: (*name).to_string(),
                    note: (*note).to_string(),
                })
                .collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row. Panics on a width mismatch or a non-finite float:
    /// those are bugs in the caller, which must use [`Cell::Empty`]
    /// plus a flag column for undefined values.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        for cell in &row {
            if let Cell::Float(v) = cell {
                assert!(v.is_finite(), "non-finite value in table: {v}");
            }
        }
        self.rows.push(row);
    }

    /// Column descriptors.
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Number of data rows.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Cell at `(row, column name)`, if present.
    #[cfg(test)]
    pub fn cell(&self, row: usize, name: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c.name == name)?;
        self.rows.get(row).map(|r| &r[j])
    }

    /// Writes the table as CSV (header row + data rows).
    pub fn write_csv<W: Write>(&self, sink: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// The CSV serialization as a string.
    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}
