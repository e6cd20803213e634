#![allow(dead_code)]

use weilmot_core::weil::WeilPolynomial;

pub struct Entry {
    pub label: String,
    pub q: i64,
    pub coeffs: Vec<i64>,
}

pub fn corpus() -> Vec<Entry> {
    let text = include_str!("../../../../data/corpus.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace();
            let label = it.next().unwrap().to_string();
            let q = it.next().unwrap().parse().unwrap();
            let coeffs = it.map(|t| t.parse().unwrap()).collect();
            Entry { label, q, coeffs }
        })
        .collect()
}

impl Entry {
    pub fn weil(&self) -> WeilPolynomial {
        WeilPolynomial::from_i64(self.q, &self.coeffs).unwrap_or_else(|e| panic!("{}: {e}", self.label))
    }
}
