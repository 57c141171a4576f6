// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

pub fn qs(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(n, d)| q(n, d)).collect()
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

/// Shortest-path metric of random weights `k/q`; denominators stay `q`.
pub fn closure_space(n: usize, q: i64, weights: &[i64]) -> FiniteMetricSpace {
    let mut d: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::zero() } else { Rational::ratio(weights[i.min(j) * n + i.max(j)], q) })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::from_rows(d).unwrap()
}

pub fn arb_space(max_n: usize, max_q: i64) -> impl Strategy<Value = FiniteMetricSpace> {
    (1..=max_n, 1..=max_q).prop_flat_map(|(n, q)| {
        prop::collection::vec(1i64..=2 * q, n * n).prop_map(move |w| closure_space(n, q, &w))
    })
}

/// Spaces with few distinct distances, so isometry groups are nontrivial.
pub fn arb_symmetric_space(max_n: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(1i64..=2, n * n).prop_map(move |w| closure_space(n, 1, &w)))
}
