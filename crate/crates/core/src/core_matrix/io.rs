//! Matrix dump/load.
//!
//! JSON layout: `{"rows":R,"cols":C,"data":[[re,im],…]}`, row-major, every
//! float written with 17 significant digits so values round-trip exactly.
//! CSV layout: header `row,col,re,im`, one entry per line.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::Deserialize;

use super::dense::ComplexDense;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Formats a float with 17 significant digits (scientific notation, valid
/// JSON number syntax).
pub fn fmt_f17(x: f64) -> String {
    format!("{x:.16e}")
}

impl<T: Scalar> ComplexDense<T> {
    pub fn to_json_string(&self) -> String {
        let mut out = String::with_capacity(32 + self.data().len() * 52);
        let _ = write!(out, "{{\"rows\":{},\"cols\":{},\"data\":[", self.rows(), self.cols());
        for (i, z) in self.data().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "[{},{}]",
                fmt_f17(z.re.to_f64_lossy()),
                fmt_f17(z.im.to_f64_lossy())
            );
        }
        out.push_str("]}");
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let data = doc
            .data
            .into_iter()
            .map(|[re, im]| Complex::new(T::lit(re), T::lit(im)))
            .collect();
        Self::from_vec(doc.rows, doc.cols, data)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let z = self.get(r, c);
                let _ = writeln!(
                    out,
                    "{r},{c},{},{}",
                    fmt_f17(z.re.to_f64_lossy()),
                    fmt_f17(z.im.to_f64_lossy())
                );
            }
        }
        out
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(Error::from)
    }

    pub fn read_json(path: &std::path::Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_matrix::build_figure1;
    use proptest::prelude::*;

    #[test]
    fn json_layout() {
        let m = ComplexDense::from_vec(1, 1, vec![Complex::new(1.0_f64, -0.5)]).unwrap();
        assert_eq!(
            m.to_json_string(),
            "{\"rows\":1,\"cols\":1,\"data\":[[1.0000000000000000e0,-5.0000000000000000e-1]]}"
        );
        let csv = m.to_csv_string();
        assert_eq!(csv, "row,col,re,im\n0,0,1.0000000000000000e0,-5.0000000000000000e-1\n");
    }

    #[test]
    fn figure1_round_trip_is_bit_exact() {
        let f = build_figure1::<f64>(7).unwrap();
        let back = ComplexDense::<f64>::from_json_str(&f.to_json_string()).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ComplexDense::<f64>::from_json_str("{\"rows\":2,\"cols\":1,\"data\":[[1,0]]}").is_err());
    }

    proptest! {
        #[test]
        fn any_finite_entries_round_trip(re in -1e300f64..1e300, im in -1e-300f64..1e-300) {
            let m = ComplexDense::from_vec(1, 1, vec![Complex::new(re, im)]).unwrap();
            let back = ComplexDense::<f64>::from_json_str(&m.to_json_string()).unwrap();
            prop_assert_eq!(m, back);
        }
    }
}
