#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use sweepadv::conservative::StepBoundary;
use sweepadv::nonconservative::{BoundaryData1D, BoundaryValues, Problem1D};
use sweepadv::velocity::CourantNumbers;

/// A smooth Courant profile `amp sin(freq s + phase) + shift` on `len` points;
/// usually changes sign.
pub fn courant_profile(len: usize, amp: f64, freq: f64, phase: f64, shift: f64) -> CourantNumbers {
    let values = (0..len)
        .map(|k| amp * (2.0 * PI * freq * k as f64 / (len - 1) as f64 + phase).sin() + shift)
        .collect();
    CourantNumbers::new(values).unwrap()
}

#[derive(Debug, Clone)]
pub struct NodeCase {
    pub phi: Vec<f64>,
    pub c: CourantNumbers,
    pub alpha: Vec<f64>,
    pub bv: BoundaryValues,
}

fn bv() -> impl Strategy<Value = BoundaryValues> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(left, right)| BoundaryValues { left, right })
}

/// Node-grid instances with `I <= 50` and sign-changing Courant numbers.
pub fn node_case() -> impl Strategy<Value = NodeCase> {
    (4usize..=50).prop_flat_map(|cells| {
        let n = cells + 1;
        (
            prop::collection::vec(-1.0..1.0f64, n),
            (0.0..20.0f64, 0.3..3.0f64, 0.0..2.0 * PI, -5.0..5.0f64),
            prop::collection::vec(0.0..=1.0f64, n),
            bv(),
        )
            .prop_map(move |(phi, (amp, freq, phase, shift), alpha, bv)| NodeCase {
                c: courant_profile(n, amp, freq, phase, shift),
                phi,
                alpha,
                bv,
            })
    })
}

#[derive(Debug, Clone)]
pub struct CellCase {
    pub phi: Vec<f64>,
    pub c: CourantNumbers,
    pub alpha: f64,
    pub sb: StepBoundary,
    pub coupled: bool,
}

/// Cell-grid instances: `cells` values and `cells + 1` face Courant numbers.
pub fn cell_case() -> impl Strategy<Value = CellCase> {
    (2usize..=50).prop_flat_map(|cells| {
        (
            prop::collection::vec(-1.0..1.0f64, cells),
            (0.0..20.0f64, 0.3..3.0f64, 0.0..2.0 * PI, -5.0..5.0f64),
            0.0..=1.0f64,
            (bv(), bv(), bv()),
            any::<bool>(),
        )
            .prop_map(
                move |(phi, (amp, freq, phase, shift), alpha, (old, mid, new), coupled)| CellCase {
                    c: courant_profile(cells + 1, amp, freq, phase, shift),
                    phi,
                    alpha,
                    sb: StepBoundary { old, mid, new },
                    coupled,
                },
            )
    })
}

/// `|a - b| <= tol * (1 + max |b|)` componentwise.
pub fn close(a: &[f64], b: &[f64], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("lengths {} and {}", a.len(), b.len()));
    }
    let scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if (x - y).abs() > tol * scale {
            return Err(format!("entry {k}: {x} vs {y}"));
        }
    }
    Ok(())
}

/// Small 1D problem for adjoint checks: sign-changing velocity and a profile
/// that undershoots so the loss is not zero.
pub fn adjoint_problem(shift: f64, width: f64) -> Problem1D {
    Problem1D {
        origin: 0.0,
        length: 1.0,
        final_time: 0.5,
        velocity: Arc::new(move |x, _| (2.0 * PI * x).sin() + shift),
        time_dependent: false,
        initial: Arc::new(move |x| if (x - 0.5).abs() < width { 1.0 } else { 0.0 }),
        boundary: BoundaryData1D::constant(0.0),
        substeps: 1,
    }
}
