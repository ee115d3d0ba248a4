//! Dense row-major matrices and the plain-text matrix exchange format.
//!
//! Text format: a header line `<rows> <cols>`, followed by `rows * cols`
//! whitespace-separated tokens in row-major order. Complex tokens are written
//! `re,im` (no spaces); real matrices use plain numbers. The writer puts one
//! matrix row per line, but the reader accepts any whitespace layout.

use std::fmt::Display;
use std::io::{BufRead, Write};
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMatrix = Matrix<Complex64>;

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Domain(format!(
                "matrix data has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> {
        // chunks_exact panics on zero; a 0-column matrix has no useful rows anyway
        self.data.chunks_exact(self.cols.max(1))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl CMatrix {
    /// `self · v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        self.row_iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Token codec for the text format.
pub trait TextToken: Sized {
    fn write_token(&self, out: &mut String);
    fn parse_token(tok: &str) -> Result<Self>;
}

impl TextToken for f64 {
    fn write_token(&self, out: &mut String) {
        push_display(out, self);
    }
    fn parse_token(tok: &str) -> Result<Self> {
        parse_f64(tok)
    }
}

impl TextToken for Complex64 {
    fn write_token(&self, out: &mut String) {
        push_display(out, &self.re);
        out.push(',');
        push_display(out, &self.im);
    }
    fn parse_token(tok: &str) -> Result<Self> {
        let (re, im) = tok
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("complex token `{tok}` lacks a comma")))?;
        Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?))
    }
}

fn push_display<D: Display>(out: &mut String, v: &D) {
    use std::fmt::Write as _;
    let _ = write!(out, "{v}");
}

fn parse_f64(tok: &str) -> Result<f64> {
    f64::from_str(tok).map_err(|_| Error::Parse(format!("bad number `{tok}`")))
}

pub fn write_matrix<T: TextToken, W: Write>(m: &Matrix<T>, mut w: W) -> Result<()> {
    let mut buf = format!("{} {}\n", m.rows, m.cols);
    for r in 0..m.rows {
        for (c, v) in m.row(r).iter().enumerate() {
            if c > 0 {
                buf.push(' ');
            }
            v.write_token(&mut buf);
        }
        buf.push('\n');
    }
    w.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn read_matrix<T: TextToken, R: BufRead>(r: R) -> Result<Matrix<T>> {
    let mut text = String::new();
    let mut r = r;
    r.read_to_string(&mut text)?;
    let mut toks = text.split_whitespace();
    let mut dim = || -> Result<usize> {
        toks.next()
            .ok_or_else(|| Error::Parse("missing matrix header".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad matrix header".into()))
    };
    let rows = dim()?;
    let cols = dim()?;
    let data = toks.map(T::parse_token).collect::<Result<Vec<_>>>()?;
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries for {rows}x{cols}, found {}",
            rows * cols,
            data.len()
        )));
    }
    Matrix::from_vec(rows, cols, data)
}
