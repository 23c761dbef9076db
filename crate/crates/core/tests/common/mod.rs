#![allow(dead_code)]

use lpp_forge::gf::{Field, FieldSpec};
use lpp_forge::klenian::EKlenianGroup;
use lpp_forge::perm::{PermTuple, Permutation};

pub fn f7() -> Field {
    FieldSpec::prime(7).unwrap()
}

pub const F7_CYCLE: [usize; 7] = [2, 0, 1, 3, 5, 6, 4];

pub const F7_F: &str = "x^5 - y^5 - x^4 + y^4 + 3x^3 + 4y^3 + 2x^2 + 5y^2 + x - y + 6";
pub const F7_G: &str = "2x^5 - y^5 + 5x^4 + y^4 - x^3 + 4y^3 + 4x^2 + 5y^2 + 2x - y + 4";

pub const F7_GRID_F: [[usize; 7]; 7] = [
    [6, 0, 5, 1, 4, 2, 3],
    [5, 6, 4, 0, 3, 1, 2],
    [0, 1, 6, 2, 5, 3, 4],
    [4, 5, 3, 6, 2, 0, 1],
    [1, 2, 0, 3, 6, 4, 5],
    [3, 4, 2, 5, 1, 6, 0],
    [2, 3, 1, 4, 0, 5, 6],
];

pub const F7_GRID_G: [[usize; 7]; 7] = [
    [4, 5, 3, 6, 2, 0, 1],
    [2, 3, 1, 4, 0, 5, 6],
    [6, 0, 5, 1, 4, 2, 3],
    [0, 1, 6, 2, 5, 3, 4],
    [1, 2, 0, 3, 6, 4, 5],
    [5, 6, 4, 0, 3, 1, 2],
    [3, 4, 2, 5, 1, 6, 0],
];

pub fn f7_group() -> EKlenianGroup {
    EKlenianGroup::from_cycle(&f7(), &F7_CYCLE).unwrap()
}

/// F_9 with `u^2 + 2u + 2 = 0`, listed as successive powers of `u`.
pub fn f9_powers() -> Field {
    let base = FieldSpec::new(3, 2, Some(vec![2, 2, 1]), None).unwrap();
    base.with_order_labels(&["0", "u", "u+1", "2u+1", "2", "2u", "2u+2", "u+2", "1"])
        .unwrap()
}

pub const F9_CYCLE: &str = "0, 2u+1, u+2, u, u+1, 2u+2, 1, 2, 2u";

pub fn f9_group() -> EKlenianGroup {
    let f = f9_powers();
    let cycle = f.parse_element_list(F9_CYCLE).unwrap();
    EKlenianGroup::from_cycle(&f, &cycle).unwrap()
}

pub const F9_GRID_F: [&str; 9] = [
    "1, u+1, 2u+1, 0, 2u+2, u+2, 2, u, 2u",
    "2u, 1, 0, 2u+2, 2u+1, 2, u, u+2, u+1",
    "2, u+2, 1, 2u, u+1, 2u+1, 0, 2u+2, u",
    "u+2, u, u+1, 1, 2u, 2u+2, 2u+1, 0, 2",
    "u, 2, 2u, u+1, 1, 0, 2u+2, 2u+1, u+2",
    "0, 2u+1, 2, u, u+2, 1, 2u, u+1, 2u+2",
    "2u+1, 2u+2, u+2, 2, u, u+1, 1, 2u, 0",
    "2u+2, 0, u, u+2, 2, 2u, u+1, 1, 2u+1",
    "u+1, 2u, 2u+2, 2u+1, 0, u, u+2, 2, 1",
];

pub const F9_GRID_G: [&str; 9] = [
    "u+2, u, u+1, 1, 2u, 2u+2, 2u+1, 0, 2",
    "u, 2, 2u, u+1, 1, 0, 2u+2, 2u+1, u+2",
    "1, u+1, 2u+1, 0, 2u+2, u+2, 2, u, 2u",
    "2u, 1, 0, 2u+2, 2u+1, 2, u, u+2, u+1",
    "u+1, 2u, 2u+2, 2u+1, 0, u, u+2, 2, 1",
    "0, 2u+1, 2, u, u+2, 1, 2u, u+1, 2u+2",
    "2u+2, 0, u, u+2, 2, 2u, u+1, 1, 2u+1",
    "2u+1, 2u+2, u+2, 2, u, u+1, 1, 2u, 0",
    "2, u+2, 1, 2u, u+1, 2u+1, 0, 2u+2, u",
];

pub fn label_grid(field: &Field, rows: &[&str]) -> Vec<Vec<usize>> {
    rows.iter()
        .map(|r| field.parse_element_list(r).unwrap())
        .collect()
}

/// F_4 with `u^2 + u + 1 = 0`, listed as `0, u, u^2, u^3`.
pub fn f4_powers() -> Field {
    let base = FieldSpec::new(2, 2, Some(vec![1, 1, 1]), None).unwrap();
    base.with_order_labels(&["0", "u", "u+1", "1"]).unwrap()
}

pub const F4_CYCLE: &str = "0, 1, u, u+1";
pub const F4_P: &str = "ux^2y^2 + (u+1)x^2y + (u+1)xy^2 + xy + y^2 + ux + 1";

pub fn f4_group() -> EKlenianGroup {
    let f = f4_powers();
    let cycle = f.parse_element_list(F4_CYCLE).unwrap();
    EKlenianGroup::from_cycle(&f, &cycle).unwrap()
}

/// F_8 with `u^3 + u + 1 = 0`, listed as `0, u, …, u^7`.
pub fn f8_powers() -> Field {
    let base = FieldSpec::new(2, 3, Some(vec![1, 1, 0, 1]), None).unwrap();
    base.with_order_labels(&["0", "u", "u^2", "u+1", "u^2+u", "u^2+u+1", "u^2+1", "1"])
        .unwrap()
}

pub const F8_CYCLE: &str = "0, 1, u^2+1, u, u^2+u, u^2, u^2+u+1, u+1";
pub const F8_ALPHA: &str = "(0,u)(u^2,u^3)(u^4,u^5)(u^6,u^7)";
pub const F8_BETA: &str = "(0,u^2,u^4,u^6)(u,u^3,u^5,u^7)";
pub const F8_H2_ALPHA: &str = "(0,u,u^2,u^3)(u^4,u^5,u^6,u^7)";
pub const F8_H2_BETA: &str = "(0,u^4,u^2,u^6)(u,u^5,u^3,u^7)";

pub fn f5() -> Field {
    FieldSpec::prime(5).unwrap()
}

fn cycles(q: usize, cs: &[&[usize]]) -> Permutation {
    let v: Vec<Vec<usize>> = cs.iter().map(|c| c.to_vec()).collect();
    Permutation::from_cycles(q, &v).unwrap()
}

/// `β_i = β_0 ∘ α_i⁻¹` from the fixed-point-free quotients `α_i`.
pub fn f5_constructed_tuple() -> PermTuple {
    let beta0 = cycles(5, &[&[0, 1]]);
    let alphas = [
        Permutation::identity(5),
        cycles(5, &[&[0, 1], &[2, 3, 4]]),
        cycles(5, &[&[0, 3, 2, 1, 4]]),
        cycles(5, &[&[0, 4, 3, 1, 2]]),
        cycles(5, &[&[0, 2, 4, 1, 3]]),
    ];
    PermTuple::new(
        alphas
            .iter()
            .map(|a| beta0.then_after(&a.inverse()))
            .collect(),
    )
    .unwrap()
}

pub const F5_CONSTRUCTED: &str =
    "2x^3y^3 + 4x^2y^3 + 2x^3y + x^2y^2 + 4x^3 + 2x^2y + 4xy^2 + 4y^3 + 2xy + 1";

pub fn f5_second_class_tuple() -> PermTuple {
    PermTuple::new(vec![
        cycles(5, &[&[1, 2, 4, 3]]),
        cycles(5, &[&[0, 1], &[2, 3, 4]]),
        cycles(5, &[&[0, 2], &[1, 4]]),
        cycles(5, &[&[0, 3]]),
        cycles(5, &[&[0, 4], &[1, 3, 2]]),
    ])
    .unwrap()
}

pub const F5_SECOND_CLASS: &str =
    "2x^3y^3 + 2x^3y^2 + 3x^2y^3 + 2x^3y + 2xy^3 + x^2y + 2xy^2 + 2xy + x + y";

/// F_9 with `u^2 + 2u + 2 = 0` in base-3 order; level tuple of `x^5 + y^5`.
pub fn f9_base3() -> Field {
    FieldSpec::new(3, 2, Some(vec![2, 2, 1]), None).unwrap()
}

pub const F9_QUINTIC_TUPLE: [&str; 9] = [
    "(1,2)(u,2u)(u+1,2u+2)(u+2,2u+1)",
    "(0,1)(u,u+1)(u+2,2u)(2u+1,2u+2)",
    "(0,2)(u,2u+1)(u+1,u+2)(2u,2u+2)",
    "(0,2u)(1,2u+1)(2,u+1)(u+2,2u+2)",
    "(0,u+1)(1,2u)(2,2u+1)(u,u+2)",
    "(0,2u+1)(1,u+1)(2,2u)(u,2u+2)",
    "(0,u)(1,2u+2)(2,u+2)(u+1,2u+1)",
    "(0,u+2)(1,u)(2,2u+2)(u+1,2u)",
    "(0,2u+2)(1,u+2)(2,u)(2u,2u+1)",
];
