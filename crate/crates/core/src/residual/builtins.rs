//! Canonical expressions (`LHS - RHS`) for the equations this crate solves.

use super::expression::{Factor, ParamPoly, PolyDiffExpression, Term};

pub const ALPHA: &str = "alpha";
pub const BETA: &str = "beta";
pub const GAMMA: &str = "gamma";
pub const DELTA: &str = "delta";
pub const NU: &str = "nu";
/// Reciprocal density; pressure enters the momentum equations as `(1/rho) dP`.
pub const INV_RHO: &str = "inv_rho";

fn y(derivative: usize, power: u32) -> Factor {
    Factor::new("y", &[derivative], power)
}

/// Painleve VI shifted so that the expansion point `x = 0` corresponds to
/// `x = -1` in the original variable. Unknown `y`, axis `x`.
pub fn pvi_shifted() -> PolyDiffExpression {
    let lin = ParamPoly::linear;
    PolyDiffExpression::new(&["x"])
        // y'' terms
        .term(Term::new(vec![y(0, 3), y(2, 1)]).with_univariate(&[8, -24, 26, -12, 2]))
        .term(Term::new(vec![y(0, 2), y(2, 1)]).with_univariate(&[0, -8, 24, -26, 12, -2]))
        .term(Term::new(vec![y(0, 1), y(2, 1)]).with_univariate(&[-8, 32, -50, 38, -14, 2]))
        // p^2 terms
        .minus(Term::new(vec![y(0, 2), y(1, 2)]).with_univariate(&[12, -36, 39, -18, 3]))
        .minus(Term::new(vec![y(0, 1), y(1, 2)]).with_univariate(&[0, -8, 24, -26, 12, -2]))
        .minus(Term::new(vec![y(1, 2)]).with_univariate(&[-4, 16, -25, 19, -7, 1]))
        // p terms
        .minus(Term::new(vec![y(0, 3), y(1, 1)]).with_univariate(&[12, -26, 18, -4]))
        .minus(Term::new(vec![y(0, 2), y(1, 1)]).with_univariate(&[-16, 40, -36, 14, -2]))
        .minus(Term::new(vec![y(0, 1), y(1, 1)]).with_univariate(&[4, -14, 18, -10, 2]))
        // parameter terms
        .minus(Term::new(vec![y(0, 6)]).with_monomial(&[0], lin(&[(2, ALPHA)])))
        .minus(Term::new(vec![y(0, 5)]).with_monomial(&[1], lin(&[(-4, ALPHA)])))
        .minus(
            Term::new(vec![y(0, 4)])
                .with_monomial(&[2], lin(&[(2, ALPHA), (2, DELTA)]))
                .with_monomial(&[1], lin(&[(4, ALPHA), (2, BETA), (2, GAMMA), (-6, DELTA)]))
                .with_monomial(&[0], lin(&[(-4, ALPHA), (-2, BETA), (-4, GAMMA), (4, DELTA)])),
        )
        .minus(
            Term::new(vec![y(0, 3)])
                .with_monomial(&[2], lin(&[(-4, ALPHA), (-4, BETA), (-4, GAMMA), (-4, DELTA)]))
                .with_monomial(&[1], lin(&[(4, ALPHA), (4, BETA), (12, GAMMA), (12, DELTA)]))
                .with_monomial(&[0], lin(&[(-8, GAMMA), (-8, DELTA)])),
        )
        .minus(
            Term::new(vec![y(0, 2)])
                .with_monomial(&[3], lin(&[(2, BETA), (2, GAMMA)]))
                .with_monomial(&[2], lin(&[(2, ALPHA), (2, BETA), (-8, GAMMA), (2, DELTA)]))
                .with_monomial(&[1], lin(&[(-4, ALPHA), (-8, BETA), (10, GAMMA), (-6, DELTA)]))
                .with_monomial(&[0], lin(&[(2, ALPHA), (4, BETA), (-4, GAMMA), (4, DELTA)])),
        )
        .minus(
            Term::new(vec![y(0, 1)])
                .with_monomial(&[3], lin(&[(-4, BETA)]))
                .with_monomial(&[2], lin(&[(8, BETA)]))
                .with_monomial(&[1], lin(&[(-4, BETA)])),
        )
        .minus(
            Term::new(vec![])
                .with_monomial(&[3], lin(&[(2, BETA)]))
                .with_monomial(&[2], lin(&[(-6, BETA)]))
                .with_monomial(&[1], lin(&[(6, BETA)]))
                .with_monomial(&[0], lin(&[(-2, BETA)])),
        )
}

const NS_AXES: [&str; 4] = ["x", "y", "z", "t"];
const VELOCITY: [&str; 3] = ["u", "v", "w"];

fn unit(axis: usize, m: usize, rank: usize) -> Vec<usize> {
    let mut d = vec![0; rank];
    d[axis] = m;
    d
}

fn one(rank: usize) -> Vec<usize> {
    vec![0; rank]
}

/// Momentum balance for velocity component `component` (0 = u, 1 = v, 2 = w):
/// `u c_x + v c_y + w c_z + c_t + (1/rho) P_a - nu (c_xx + c_yy + c_zz)`.
pub fn navier_stokes_momentum(component: usize) -> PolyDiffExpression {
    let c = VELOCITY[component];
    let mut expr = PolyDiffExpression::new(&NS_AXES);
    for (axis, carrier) in VELOCITY.iter().enumerate() {
        expr = expr.term(
            Term::new(vec![Factor::new(carrier, &one(4), 1), Factor::new(c, &unit(axis, 1, 4), 1)])
                .with_monomial(&one(4), ParamPoly::constant(1)),
        );
    }
    expr = expr
        .term(Term::new(vec![Factor::new(c, &unit(3, 1, 4), 1)]).with_monomial(&one(4), ParamPoly::constant(1)))
        .term(
            Term::new(vec![Factor::new("P", &unit(component, 1, 4), 1)])
                .with_monomial(&one(4), ParamPoly::param(INV_RHO)),
        );
    for axis in 0..3 {
        expr = expr.minus(
            Term::new(vec![Factor::new(c, &unit(axis, 2, 4), 1)]).with_monomial(&one(4), ParamPoly::param(NU)),
        );
    }
    expr
}

/// The three momentum equations in `x, y, z` order.
pub fn navier_stokes() -> [PolyDiffExpression; 3] {
    [0, 1, 2].map(navier_stokes_momentum)
}

/// `u_x + v_y + w_z`.
pub fn continuity() -> PolyDiffExpression {
    VELOCITY.iter().enumerate().fold(PolyDiffExpression::new(&NS_AXES), |e, (axis, c)| {
        e.term(Term::new(vec![Factor::new(c, &unit(axis, 1, 4), 1)]).with_monomial(&one(4), ParamPoly::constant(1)))
    })
}

const BL_AXES: [&str; 3] = ["x", "y", "t"];

/// Boundary-layer momentum with the pressure gradient replaced by the
/// external stream `U(x, t)`:
/// `u_t + u u_x + v u_y - U_t - U U_x - nu u_yy`.
///
/// `U` is bound as a series over `(x, y, t)` that is constant in `y`.
pub fn prandtl() -> PolyDiffExpression {
    let c1 = || ParamPoly::constant(1);
    let d = |axis: usize, m: usize| unit(axis, m, 3);
    PolyDiffExpression::new(&BL_AXES)
        .term(Term::new(vec![Factor::new("u", &d(2, 1), 1)]).with_monomial(&one(3), c1()))
        .term(Term::new(vec![Factor::new("u", &one(3), 1), Factor::new("u", &d(0, 1), 1)]).with_monomial(&one(3), c1()))
        .term(Term::new(vec![Factor::new("v", &one(3), 1), Factor::new("u", &d(1, 1), 1)]).with_monomial(&one(3), c1()))
        .minus(Term::new(vec![Factor::new("U", &d(2, 1), 1)]).with_monomial(&one(3), c1()))
        .minus(Term::new(vec![Factor::new("U", &one(3), 1), Factor::new("U", &d(0, 1), 1)]).with_monomial(&one(3), c1()))
        .minus(Term::new(vec![Factor::new("u", &d(1, 2), 1)]).with_monomial(&one(3), ParamPoly::param(NU)))
}

/// `u_x + v_y` over `(x, y, t)`.
pub fn prandtl_continuity() -> PolyDiffExpression {
    PolyDiffExpression::new(&BL_AXES)
        .term(Term::new(vec![Factor::new("u", &unit(0, 1, 3), 1)]).with_monomial(&one(3), ParamPoly::constant(1)))
        .term(Term::new(vec![Factor::new("v", &unit(1, 1, 3), 1)]).with_monomial(&one(3), ParamPoly::constant(1)))
}
