// SPDX-License-Identifier: Apache-2.0

//! JSON file formats for matrices and globalization certificates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::globalization::{GlobalizationCertificate, TableEntry};
use crate::isometry::{PartialIsometry, Permutation};
use crate::metric::{validate_metric, FiniteMetricSpace, ValidationReport};
use crate::rational::Rational;

pub const MATRIX_FORMAT: &str = "urysohn-matrix";
pub const CERTIFICATE_FORMAT: &str = "urysohn-certificate";
pub const FORMAT_VERSION: u32 = 1;

/// A labelled distance matrix with entries written as `p/q` or `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub format: String,
    pub version: u32,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

/// Outcome of reading a matrix document that parsed.
pub enum Loaded {
    Space(FiniteMetricSpace),
    Invalid(ValidationReport),
}

impl MatrixDocument {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        MatrixDocument {
            format: MATRIX_FORMAT.into(),
            version: FORMAT_VERSION,
            labels: space.labels().to_vec(),
            matrix: (0..space.len()).map(|i| space.row(i).iter().map(ToString::to_string).collect()).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix document: {e}")))?;
        doc.check_header()?;
        Ok(doc)
    }

    fn check_header(&self) -> Result<()> {
        if self.format != MATRIX_FORMAT {
            return Err(Error::Parse(format!("expected format {MATRIX_FORMAT:?}, found {:?}", self.format)));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported version {}", self.version)));
        }
        Ok(())
    }

    pub fn rows(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.matrix.len();
        if self.labels.len() != n {
            return Err(Error::Shape(format!("{} labels for {n} rows", self.labels.len())));
        }
        self.matrix
            .iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::Shape(format!("row of length {} in a {n}x{n} matrix", row.len())));
                }
                row.iter().map(|s| s.parse()).collect()
            })
            .collect()
    }

    /// Parses the entries and validates the metric axioms.
    pub fn load(&self) -> Result<Loaded> {
        let rows = self.rows()?;
        let report = validate_metric(&rows)?;
        if !report.valid {
            return Ok(Loaded::Invalid(report));
        }
        FiniteMetricSpace::new(self.labels.clone(), rows).map(Loaded::Space)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub domain: Vec<usize>,
    pub image: Vec<usize>,
    pub extension: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub version: u32,
    pub base: MatrixDocument,
    pub extension: MatrixDocument,
    pub embedding: Vec<usize>,
    pub table: Vec<TableRow>,
}

impl CertificateDocument {
    pub fn from_certificate(cert: &GlobalizationCertificate) -> Self {
        CertificateDocument {
            format: CERTIFICATE_FORMAT.into(),
            version: FORMAT_VERSION,
            base: MatrixDocument::from_space(&cert.base),
            extension: MatrixDocument::from_space(&cert.extension),
            embedding: cert.embedding.clone(),
            table: cert
                .table
                .iter()
                .map(|e| TableRow { domain: e.partial.domain(), image: e.partial.images(), extension: e.extension.images().to_vec() })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate document: {e}")))?;
        if doc.format != CERTIFICATE_FORMAT {
            return Err(Error::Parse(format!("expected format {CERTIFICATE_FORMAT:?}, found {:?}", doc.format)));
        }
        if doc.version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported version {}", doc.version)));
        }
        doc.base.check_header()?;
        doc.extension.check_header()?;
        Ok(doc)
    }

    /// Rebuilds the certificate. Rows are taken as written so that the
    /// verifier, not the parser, judges them; only their shape is checked.
    pub fn to_certificate(&self) -> Result<std::result::Result<GlobalizationCertificate, ValidationReport>> {
        let base = match self.base.load()? {
            Loaded::Space(s) => s,
            Loaded::Invalid(r) => return Ok(Err(r)),
        };
        let extension = match self.extension.load()? {
            Loaded::Space(s) => s,
            Loaded::Invalid(r) => return Ok(Err(r)),
        };
        let n = base.len();
        let mut table = Vec::with_capacity(self.table.len());
        for row in &self.table {
            if row.domain.len() != row.image.len() || row.domain.iter().chain(&row.image).any(|&x| x >= n) {
                return Err(Error::Shape(format!("table row {:?} -> {:?} does not fit {n} points", row.domain, row.image)));
            }
            let mut map = vec![None; n];
            for (&x, &y) in row.domain.iter().zip(&row.image) {
                if map[x].replace(y).is_some() {
                    return Err(Error::Shape(format!("table row repeats domain point {x}")));
                }
            }
            let extension = Permutation::from_images(row.extension.clone())?;
            table.push(TableEntry { partial: PartialIsometry::from_map_unchecked(map), extension });
        }
        Ok(Ok(GlobalizationCertificate { base, extension, embedding: self.embedding.clone(), table }))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let space = FiniteMetricSpace::from_rows(vec![
            vec![Rational::zero(), Rational::ratio(3, 2)],
            vec![Rational::ratio(3, 2), Rational::zero()],
        ])
        .unwrap();
        let doc = MatrixDocument::from_space(&space);
        assert_eq!(doc.matrix[0][1], "3/2");
        let back = MatrixDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(matches!(back.load().unwrap(), Loaded::Space(s) if s == space));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(MatrixDocument::parse("{}"), Err(Error::Parse(_))));
        let wrong = r#"{"format":"other","version":1,"labels":[],"matrix":[]}"#;
        assert!(matches!(MatrixDocument::parse(wrong), Err(Error::Parse(_))));
        let ragged = r#"{"format":"urysohn-matrix","version":1,"labels":["a","b"],"matrix":[["0","1"],["1"]]}"#;
        assert!(matches!(MatrixDocument::parse(ragged).unwrap().load(), Err(Error::Shape(_))));
        let bad = r#"{"format":"urysohn-matrix","version":1,"labels":["a","b","c"],
            "matrix":[["0","1","3"],["1","0","1"],["3","1","0"]]}"#;
        assert!(matches!(MatrixDocument::parse(bad).unwrap().load().unwrap(), Loaded::Invalid(r) if !r.valid));
    }
}
