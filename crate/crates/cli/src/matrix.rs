//! Text format for exact rational matrices.
//!
//! A file holds one or more square matrices. Each starts with its dimension
//! `n`, followed by `n*n` row-major entries written as integers or `p/q`.
//! Tokens are separated by whitespace; `#` starts a comment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use weilmot_core::exactmath::RatMatrix;

use crate::CliError;

fn parse_rational(tok: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Malformed(format!("bad matrix entry {tok:?}"));
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_matrices(text: &str) -> Result<Vec<RatMatrix>, CliError> {
    let tokens: Vec<&str> =
        text.lines().flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let n: usize = tokens[i]
            .parse()
            .map_err(|_| CliError::Malformed(format!("expected a dimension, found {:?}", tokens[i])))?;
        i += 1;
        if n == 0 || tokens.len() < i + n * n {
            return Err(CliError::Malformed(format!("matrix {} needs {} entries", out.len() + 1, n * n)));
        }
        let rows = (0..n)
            .map(|r| (0..n).map(|c| parse_rational(tokens[i + r * n + c])).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        i += n * n;
        out.push(RatMatrix::from_rows(rows));
    }
    Ok(out)
}
