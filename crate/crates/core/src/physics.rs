//! Constitutive laws, semi-discrete tendencies and the effective viscous flux.
//!
//! Tendencies are written in finite-volume form on conserved variables
//! `(ρ, m = ρu)`. Every face carries a mass flux, a momentum flux
//! `ρu_n u − μ∂_n u − Q n` with `Q = (μ + λ)div u − P`, and a force
//! contribution `½ρ̄(f_nb − f)` that is shared by both adjacent cells. The
//! force discretisation mirrors the pressure difference so that for `γ = 2`
//! the closed-form equilibrium density is an exact discrete steady state.

use crate::field::{advective_derivative, div, DiscGeometry, Grid, GridDisc, GridTorus};
use crate::field::{ScalarField, VectorField};
use crate::{Error, Result};

/// Physical constants of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidParams {
    mu: f64,
    beta: f64,
    gamma: f64,
    force: ScalarField,
    friction: Vec<f64>,
}

impl FluidParams {
    /// `mu > 0`, `beta > 0`, `gamma > 1`; the force potential fixes the grid.
    /// Wall friction defaults to zero.
    pub fn new(mu: f64, beta: f64, gamma: f64, force: ScalarField) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
        }
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must be > 1, got {gamma}")));
        }
        let friction = match force.grid() {
            Grid::Disc(g) => vec![0.0; g.n_th()],
            Grid::Torus(_) => Vec::new(),
        };
        Ok(Self {
            mu,
            beta,
            gamma,
            force,
            friction,
        })
    }

    /// Wall friction sampled at the angular nodes (disc only).
    pub fn with_friction(mut self, profile: Vec<f64>) -> Result<Self> {
        let Grid::Disc(g) = self.force.grid() else {
            return Err(Error::InvalidParameter(
                "wall friction only applies to the disc".into(),
            ));
        };
        if profile.len() != g.n_th() {
            return Err(Error::InvalidParameter(format!(
                "friction profile needs {} samples, got {}",
                g.n_th(),
                profile.len()
            )));
        }
        if let Some(k) = profile.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "friction must be finite and >= 0, got {k}"
            )));
        }
        self.friction = profile;
        Ok(self)
    }

    pub fn with_uniform_friction(self, k: f64) -> Result<Self> {
        let n = self.friction.len();
        self.with_friction(vec![k; n])
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn force(&self) -> &ScalarField {
        &self.force
    }

    pub fn friction(&self) -> &[f64] {
        &self.friction
    }

    pub fn grid(&self) -> &Grid {
        self.force.grid()
    }

    /// `P = ρ^γ`.
    pub fn pressure(&self, rho: &ScalarField) -> Result<ScalarField> {
        check_positive(rho)?;
        Ok(rho.map(|r| pow(r, self.gamma)))
    }

    /// `λ = ρ^β`.
    pub fn bulk_viscosity(&self, rho: &ScalarField) -> Result<ScalarField> {
        check_positive(rho)?;
        Ok(rho.map(|r| pow(r, self.beta)))
    }

    /// `θ(ρ) = 2μ log ρ + ρ^β/β`.
    pub fn theta_of(&self, rho: &ScalarField) -> Result<ScalarField> {
        check_positive(rho)?;
        Ok(rho.map(|r| self.theta_value(r)))
    }

    pub fn theta_value(&self, rho: f64) -> f64 {
        2.0 * self.mu * rho.ln() + pow(rho, self.beta) / self.beta
    }
}

/// Density and velocity at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    rho: ScalarField,
    u: VectorField,
    t: f64,
}

impl State {
    pub fn new(rho: ScalarField, u: VectorField, t: f64) -> Result<Self> {
        if rho.grid() != u.grid() {
            return Err(Error::GridMismatch);
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")));
        }
        check_positive(&rho)?;
        Ok(Self { rho, u, t })
    }

    /// Rebuilds velocity from conserved variables.
    pub fn from_conserved(rho: ScalarField, m: &VectorField, t: f64) -> Result<Self> {
        check_positive(&rho)?;
        let inv = rho.map(|r| 1.0 / r);
        let u = m.scale(&inv)?;
        Self::new(rho, u, t)
    }

    pub fn rho(&self) -> &ScalarField {
        &self.rho
    }

    pub fn u(&self) -> &VectorField {
        &self.u
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &Grid {
        self.rho.grid()
    }

    pub fn momentum(&self) -> VectorField {
        self.u.scale(&self.rho).expect("state fields share a grid")
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

/// Time derivatives of the conserved variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Tendencies {
    pub drho: ScalarField,
    pub dm: VectorField,
}

pub fn rhs_torus(state: &State, params: &FluidParams) -> Result<Tendencies> {
    match state.grid() {
        Grid::Torus(_) => rhs(state, params),
        Grid::Disc(_) => Err(Error::InvalidGrid("rhs_torus called on a disc state".into())),
    }
}

pub fn rhs_disc(state: &State, params: &FluidParams) -> Result<Tendencies> {
    match state.grid() {
        Grid::Disc(_) => rhs(state, params),
        Grid::Torus(_) => Err(Error::InvalidGrid("rhs_disc called on a torus state".into())),
    }
}

/// Tendencies for either domain.
pub fn rhs(state: &State, params: &FluidParams) -> Result<Tendencies> {
    if state.grid() != params.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *state.grid();
    let n = grid.len();
    let m = state.momentum();
    let mut kernel = Kernel::new(params);
    let (mut drho, mut dmx, mut dmy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    kernel.eval(
        state.rho().values(),
        m.x(),
        m.y(),
        &mut drho,
        &mut dmx,
        &mut dmy,
    );
    Ok(Tendencies {
        drho: ScalarField::from_raw(grid, drho),
        dm: VectorField::from_raw(grid, dmx, dmy),
    })
}

/// `u̇ = (∂ₜm − u∂ₜρ)/ρ + (u·∇)u`.
pub fn material_accel(state: &State, tend: &Tendencies) -> Result<VectorField> {
    let rho = state.rho().values();
    let u = state.u();
    let adv = advective_derivative(u, u)?;
    let n = rho.len();
    let (dr, dmx, dmy) = (tend.drho.values(), tend.dm.x(), tend.dm.y());
    Ok(VectorField::from_raw(
        *state.grid(),
        (0..n)
            .map(|k| (dmx[k] - dr[k] * u.x()[k]) / rho[k] + adv.x()[k])
            .collect(),
        (0..n)
            .map(|k| (dmy[k] - dr[k] * u.y()[k]) / rho[k] + adv.y()[k])
            .collect(),
    ))
}

/// `F = (2μ + λ)div u − P`.
pub fn flux_f(state: &State, params: &FluidParams) -> Result<ScalarField> {
    let d = div(state.u());
    let (mu, beta, gamma) = (params.mu, params.beta, params.gamma);
    state.rho().zip_map(&d, |r, dv| {
        (2.0 * mu + pow(r, beta)) * dv - pow(r, gamma)
    })
}

/// `G = (2μ + λ)div u − (P − P_s)`.
pub fn flux_g(state: &State, params: &FluidParams, rho_s: &ScalarField) -> Result<ScalarField> {
    let f = flux_f(state, params)?;
    let gamma = params.gamma;
    f.zip_map(rho_s, |a, rs| a + pow(rs, gamma))
}

/// Ghost-to-interior ratio of the tangential velocity at the wall.
///
/// Imposes `ω = K u_θ` on the face `r = 1`, i.e. `∂_r u_θ = −(1 + K)u_θ`,
/// with the face value taken as the mean of the two cells.
pub fn wall_factor(k: f64, dr: f64) -> f64 {
    let a = 0.5 * (1.0 + k) * dr;
    (1.0 - a) / (1.0 + a)
}

/// Tangential velocity on the wall, `u_θ` at `r = 1`, per angular node.
pub fn wall_tangential(state: &State, params: &FluidParams) -> Result<Vec<f64>> {
    let Grid::Disc(g) = *state.grid() else {
        return Err(Error::InvalidGrid("wall trace needs a disc".into()));
    };
    let i = g.n_r() - 1;
    Ok((0..g.n_th())
        .map(|j| {
            let k = g.idx(i, j);
            let t = g.theta(j);
            let ut = -state.u().x()[k] * t.sin() + state.u().y()[k] * t.cos();
            0.5 * ut * (1.0 + wall_factor(params.friction[j], g.dr()))
        })
        .collect())
}

pub(crate) fn check_positive(rho: &ScalarField) -> Result<()> {
    match rho
        .values()
        .iter()
        .enumerate()
        .find(|(_, r)| !(**r > 0.0))
    {
        Some((index, &min)) => Err(Error::NonPositiveDensity { min, index }),
        None => Ok(()),
    }
}

#[inline]
pub(crate) fn pow(x: f64, e: f64) -> f64 {
    if e == 2.0 {
        x * x
    } else if e == 1.0 {
        x
    } else if e.fract() == 0.0 && e.abs() <= 8.0 {
        x.powi(e as i32)
    } else {
        x.powf(e)
    }
}

/// Preallocated tendency evaluator reused across time steps.
pub(crate) enum Kernel {
    Torus(TorusKernel),
    Disc(Box<DiscKernel>),
}

impl Kernel {
    pub(crate) fn new(params: &FluidParams) -> Self {
        match *params.grid() {
            Grid::Torus(g) => Kernel::Torus(TorusKernel::new(g, params)),
            Grid::Disc(g) => Kernel::Disc(Box::new(DiscKernel::new(g, params))),
        }
    }

    pub(crate) fn eval(
        &mut self,
        rho: &[f64],
        mx: &[f64],
        my: &[f64],
        drho: &mut [f64],
        dmx: &mut [f64],
        dmy: &mut [f64],
    ) {
        match self {
            Kernel::Torus(k) => k.eval(rho, mx, my, drho, dmx, dmy),
            Kernel::Disc(k) => k.eval(rho, mx, my, drho, dmx, dmy),
        }
    }
}

pub(crate) struct TorusKernel {
    n: usize,
    mu: f64,
    beta: f64,
    gamma: f64,
    f: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    p: Vec<f64>,
    lam: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    // x-faces then y-faces: mass, momentum x, momentum y, force
    fx: [Vec<f64>; 4],
    fy: [Vec<f64>; 4],
    forced: bool,
}

impl TorusKernel {
    fn new(g: GridTorus, params: &FluidParams) -> Self {
        let n = g.len();
        let z = || vec![0.0; n];
        Self {
            n: g.n(),
            mu: params.mu,
            beta: params.beta,
            gamma: params.gamma,
            f: params.force.values().to_vec(),
            u1: z(),
            u2: z(),
            p: z(),
            lam: z(),
            d1: z(),
            d2: z(),
            fx: [z(), z(), z(), z()],
            fy: [z(), z(), z(), z()],
            forced: params.force.values().iter().any(|v| *v != 0.0),
        }
    }

    fn eval(
        &mut self,
        rho: &[f64],
        mx: &[f64],
        my: &[f64],
        drho: &mut [f64],
        dmx: &mut [f64],
        dmy: &mut [f64],
    ) {
        let n = self.n;
        let len = n * n;
        let ih = n as f64;
        let half_ih = 0.5 * ih;
        let mu = self.mu;
        let (rho, mx, my) = (&rho[..len], &mx[..len], &my[..len]);
        {
            let (u1, u2) = (&mut self.u1[..len], &mut self.u2[..len]);
            let (p, lam) = (&mut self.p[..len], &mut self.lam[..len]);
            for k in 0..len {
                let r = rho[k];
                u1[k] = mx[k] / r;
                u2[k] = my[k] / r;
                p[k] = pow(r, self.gamma);
                lam[k] = pow(r, self.beta);
            }
        }
        let wrap_up = |j: usize| if j + 1 == n { 0 } else { j + 1 };
        let wrap_down = |j: usize| if j == 0 { n - 1 } else { j - 1 };
        let (u1, u2, p, lam, f) = (&self.u1[..], &self.u2[..], &self.p[..], &self.lam[..], &self.f[..]);
        // d1 = ∂₁u₁ and d2 = ∂₂u₂, the transverse parts of the face divergence
        for j in 0..n {
            let (row, up, down) = (j * n, wrap_up(j) * n, wrap_down(j) * n);
            let (a, d1) = (&u1[row..row + n], &mut self.d1[row..row + n]);
            for i in 0..n {
                d1[i] = (a[wrap_up(i)] - a[wrap_down(i)]) * half_ih;
            }
            let (hi, lo, d2) = (&u2[up..up + n], &u2[down..down + n], &mut self.d2[row..row + n]);
            for i in 0..n {
                d2[i] = (hi[i] - lo[i]) * half_ih;
            }
        }
        let forced = self.forced;
        let (d1, d2) = (&self.d1, &self.d2);
        let cx = Side { rho, u1, u2, lam, p, f, d: d2 };
        let cy = Side { d: d1, ..cx };
        {
            let [xm, xa, xb, xs] = &mut self.fx;
            let [ym, ya, yb, ys] = &mut self.fy;
            for j in 0..n {
                let (row, up, e) = (j * n, wrap_up(j) * n, j * n + n - 1);
                // x-faces between (i, j) and (i+1, j), the last one wrapping
                face_run::<0>(
                    cx.at(row, n - 1),
                    cx.at(row + 1, n - 1),
                    [&mut xm[row..e], &mut xa[row..e], &mut xb[row..e], &mut xs[row..e]],
                    mu,
                    ih,
                    forced,
                );
                face_run::<0>(
                    cx.at(e, 1),
                    cx.at(row, 1),
                    [&mut xm[e..e + 1], &mut xa[e..e + 1], &mut xb[e..e + 1], &mut xs[e..e + 1]],
                    mu,
                    ih,
                    forced,
                );
                let r = row..row + n;
                face_run::<1>(
                    cy.at(row, n),
                    cy.at(up, n),
                    [&mut ym[r.clone()], &mut ya[r.clone()], &mut yb[r.clone()], &mut ys[r]],
                    mu,
                    ih,
                    forced,
                );
            }
        }
        let fx = Faces::of(&self.fx);
        let fy = Faces::of(&self.fy);
        for j in 0..n {
            let (row, down) = (j * n, wrap_down(j) * n);
            let (e, m) = (row + n - 1, n - 1);
            let (r0, r1) = (row..row + 1, row + 1..row + n);
            div_run(
                [fx.at(e, 1), fx.at(row, 1), fy.at(down, 1), fy.at(row, 1)],
                [&mut drho[r0.clone()], &mut dmx[r0.clone()], &mut dmy[r0]],
                ih,
            );
            div_run(
                [fx.at(row, m), fx.at(row + 1, m), fy.at(down + 1, m), fy.at(row + 1, m)],
                [&mut drho[r1.clone()], &mut dmx[r1.clone()], &mut dmy[r1]],
                ih,
            );
        }
    }
}

/// Cell data on one side of a run of faces.
#[derive(Clone, Copy)]
struct Side<'a> {
    rho: &'a [f64],
    u1: &'a [f64],
    u2: &'a [f64],
    lam: &'a [f64],
    p: &'a [f64],
    f: &'a [f64],
    /// Transverse derivative, averaged onto the face.
    d: &'a [f64],
}

impl<'a> Side<'a> {
    fn at(&self, start: usize, m: usize) -> Side<'a> {
        let r = start..start + m;
        Side {
            rho: &self.rho[r.clone()],
            u1: &self.u1[r.clone()],
            u2: &self.u2[r.clone()],
            lam: &self.lam[r.clone()],
            p: &self.p[r.clone()],
            f: &self.f[r.clone()],
            d: &self.d[r],
        }
    }
}

/// Mass, momentum and force fluxes through consecutive faces with normal
/// axis `N`, side `a` behind and side `b` ahead.
#[inline(always)]
fn face_run<const N: usize>(a: Side, b: Side, out: [&mut [f64]; 4], mu: f64, ih: f64, forced: bool) {
    let [om, oa, ob, os] = out;
    let m = om.len();
    let (oa, ob, os) = (&mut oa[..m], &mut ob[..m], &mut os[..m]);
    let (ra, rb) = (&a.rho[..m], &b.rho[..m]);
    let (ua1, ub1, ua2, ub2) = (&a.u1[..m], &b.u1[..m], &a.u2[..m], &b.u2[..m]);
    let (la, lb, pa, pb) = (&a.lam[..m], &b.lam[..m], &a.p[..m], &b.p[..m]);
    let (da, db) = (&a.d[..m], &b.d[..m]);
    for i in 0..m {
        let rf = 0.5 * (ra[i] + rb[i]);
        let a1 = 0.5 * (ua1[i] + ub1[i]);
        let a2 = 0.5 * (ua2[i] + ub2[i]);
        let g1 = (ub1[i] - ua1[i]) * ih;
        let g2 = (ub2[i] - ua2[i]) * ih;
        let gn = if N == 0 { g1 } else { g2 };
        let q = (mu + 0.5 * (la[i] + lb[i])) * (gn + 0.5 * (da[i] + db[i])) - 0.5 * (pa[i] + pb[i]);
        let fm = if N == 0 { rf * a1 } else { rf * a2 };
        om[i] = fm;
        oa[i] = fm * a1 - mu * g1 - if N == 0 { q } else { 0.0 };
        ob[i] = fm * a2 - mu * g2 - if N == 0 { 0.0 } else { q };
    }
    if forced {
        let (fa, fb) = (&a.f[..m], &b.f[..m]);
        for i in 0..m {
            os[i] = 0.5 * (0.5 * (ra[i] + rb[i])) * (fb[i] - fa[i]);
        }
    }
}

/// Face arrays of one orientation: mass, two momentum components, force.
#[derive(Clone, Copy)]
struct Faces<'a>([&'a [f64]; 4]);

impl<'a> Faces<'a> {
    fn of(v: &'a [Vec<f64>; 4]) -> Self {
        Faces([&v[0], &v[1], &v[2], &v[3]])
    }

    fn at(&self, start: usize, m: usize) -> Self {
        Faces(self.0.map(|s| &s[start..start + m]))
    }
}

/// Flux differences for a run of cells from the x-faces behind and ahead
/// and the y-faces below and above: `[xw, xk, ys, yk]`.
#[inline(always)]
fn div_run(faces: [Faces; 4], out: [&mut [f64]; 3], ih: f64) {
    let [drho, dmx, dmy] = out;
    let m = drho.len();
    let (dmx, dmy) = (&mut dmx[..m], &mut dmy[..m]);
    let [xw, xk, ys, yk] = faces.map(|f| f.0.map(|s| &s[..m]));
    for i in 0..m {
        drho[i] = ((xw[0][i] - xk[0][i]) + (ys[0][i] - yk[0][i])) * ih;
        dmx[i] = ((xw[1][i] - xk[1][i]) + (ys[1][i] - yk[1][i]) + (xw[3][i] + xk[3][i])) * ih;
        dmy[i] = ((xw[2][i] - xk[2][i]) + (ys[2][i] - yk[2][i]) + (ys[3][i] + yk[3][i])) * ih;
    }
}

/// Polar finite-volume kernel with one ghost ring beyond `r = 1`.
pub(crate) struct DiscKernel {
    g: GridDisc,
    geo: DiscGeometry,
    mu: f64,
    beta: f64,
    gamma: f64,
    kappa: Vec<f64>,
    // extended arrays hold n_r + 1 rings, the last being the ghost ring
    f: Vec<f64>,
    rho: Vec<f64>,
    ux: Vec<f64>,
    uy: Vec<f64>,
    p: Vec<f64>,
    lam: Vec<f64>,
    tx: Vec<f64>,
    ty: Vec<f64>,
    rx: Vec<f64>,
    ry: Vec<f64>,
    // radial faces (outer face of ring i) and angular faces (j, j+1)
    fr: [Vec<f64>; 4],
    ft: [Vec<f64>; 4],
}

impl DiscKernel {
    fn new(g: GridDisc, params: &FluidParams) -> Self {
        let (nr, nth) = (g.n_r(), g.n_th());
        let ext = (nr + 1) * nth;
        let mut f = vec![0.0; ext];
        let fv = params.force.values();
        f[..nr * nth].copy_from_slice(fv);
        for j in 0..nth {
            f[nr * nth + j] = 2.0 * fv[g.idx(nr - 1, j)] - fv[g.idx(nr - 2, j)];
        }
        let z = |len| vec![0.0; len];
        Self {
            g,
            geo: DiscGeometry::new(g),
            mu: params.mu,
            beta: params.beta,
            gamma: params.gamma,
            kappa: params
                .friction
                .iter()
                .map(|&k| wall_factor(k, g.dr()))
                .collect(),
            f,
            rho: z(ext),
            ux: z(ext),
            uy: z(ext),
            p: z(ext),
            lam: z(ext),
            tx: z(ext),
            ty: z(ext),
            rx: z(nr * nth),
            ry: z(nr * nth),
            fr: [z(nr * nth), z(nr * nth), z(nr * nth), z(nr * nth)],
            ft: [z(nr * nth), z(nr * nth), z(nr * nth), z(nr * nth)],
        }
    }

    fn eval(
        &mut self,
        rho: &[f64],
        mx: &[f64],
        my: &[f64],
        drho: &mut [f64],
        dmx: &mut [f64],
        dmy: &mut [f64],
    ) {
        let g = self.g;
        let (nr, nth) = (g.n_r(), g.n_th());
        let (dr, dth) = (g.dr(), g.dth());
        let idr = 1.0 / dr;
        let chord = 2.0 * (0.5 * dth).sin();
        let inv_2sin = 0.5 / dth.sin();
        let ang2 = chord * chord;
        let mu = self.mu;
        let geo = &self.geo;
        let (cos, sin) = (&geo.cos, &geo.sin);

        let interior = nr * nth;
        for k in 0..interior {
            let r = rho[k];
            self.rho[k] = r;
            self.ux[k] = mx[k] / r;
            self.uy[k] = my[k] / r;
        }
        for j in 0..nth {
            let (c, s) = (cos[j], sin[j]);
            let k = g.idx(nr - 1, j);
            let ur = self.ux[k] * c + self.uy[k] * s;
            let ut = -self.ux[k] * s + self.uy[k] * c;
            let (urg, utg) = (-ur, self.kappa[j] * ut);
            let gk = interior + j;
            self.ux[gk] = urg * c - utg * s;
            self.uy[gk] = urg * s + utg * c;
            let extrap = 2.0 * rho[k] - rho[g.idx(nr - 2, j)];
            self.rho[gk] = extrap.max(0.5 * rho[k]);
        }
        for k in 0..interior + nth {
            self.p[k] = pow(self.rho[k], self.gamma);
            self.lam[k] = pow(self.rho[k], self.beta);
        }
        let (ux, uy) = (&self.ux, &self.uy);
        for i in 0..=nr {
            for j in 0..nth {
                let jp = g.idx(i, (j + 1) % nth);
                let jm = g.idx(i, (j + nth - 1) % nth);
                self.tx[g.idx(i, j)] = (ux[jp] - ux[jm]) * inv_2sin;
                self.ty[g.idx(i, j)] = (uy[jp] - uy[jm]) * inv_2sin;
            }
        }
        for i in 0..nr {
            for j in 0..nth {
                let k = g.idx(i, j);
                let up = g.idx(i + 1, j);
                let dn = if i == 0 {
                    g.idx(0, g.antipode(j))
                } else {
                    g.idx(i - 1, j)
                };
                self.rx[k] = (ux[up] - ux[dn]) * 0.5 * idr;
                self.ry[k] = (uy[up] - uy[dn]) * 0.5 * idr;
            }
        }

        let (rh, p, lam, f) = (&self.rho, &self.p, &self.lam, &self.f);
        let (tx, ty, rx, ry) = (&self.tx, &self.ty, &self.rx, &self.ry);
        let [rm, ra, rb, rs] = &mut self.fr;
        for i in 0..nr {
            let rf = g.r_face(i);
            let len = rf * dth;
            let visc = mu * rf * dth * idr;
            let wall = i == nr - 1;
            for j in 0..nth {
                let (c, s) = (cos[j], sin[j]);
                let k = g.idx(i, j);
                let o = g.idx(i + 1, j);
                let rho_f = 0.5 * (rh[k] + rh[o]);
                let ax = 0.5 * (ux[k] + ux[o]);
                let ay = 0.5 * (uy[k] + uy[o]);
                let (gx, gy) = (ux[o] - ux[k], uy[o] - uy[k]);
                let dv = (gx * c + gy * s) * idr
                    + (-(tx[k] + tx[o]) * s + (ty[k] + ty[o]) * c) * 0.5 / rf;
                let q = (mu + 0.5 * (lam[k] + lam[o])) * dv - 0.5 * (p[k] + p[o]);
                let fm = if wall { 0.0 } else { rho_f * (ax * c + ay * s) * len };
                rm[k] = fm;
                ra[k] = fm * ax - visc * gx - q * len * c;
                rb[k] = fm * ay - visc * gy - q * len * s;
                rs[k] = 0.5 * rho_f * (f[o] - f[k]) * len;
            }
        }
        let [tm, ta, tb, ts] = &mut self.ft;
        // angular faces are lengthened by Δθ/chord so that, together with
        // radial faces of length r Δθ, affine fields have exact divergence
        let len = dr * dth / chord;
        for i in 0..nr {
            let r = geo.r[i];
            let visc = mu * dr * dth / (r * ang2);
            for j in 0..nth {
                let (cf, sf) = (geo.cos_face[j], geo.sin_face[j]);
                let k = g.idx(i, j);
                let o = g.idx(i, (j + 1) % nth);
                let rho_f = 0.5 * (rh[k] + rh[o]);
                let ax = 0.5 * (ux[k] + ux[o]);
                let ay = 0.5 * (uy[k] + uy[o]);
                let (gx, gy) = (ux[o] - ux[k], uy[o] - uy[k]);
                let dv = (-gx * sf + gy * cf) / (r * chord)
                    + 0.5 * ((rx[k] + rx[o]) * cf + (ry[k] + ry[o]) * sf);
                let q = (mu + 0.5 * (lam[k] + lam[o])) * dv - 0.5 * (p[k] + p[o]);
                let fm = rho_f * (-ax * sf + ay * cf) * len;
                tm[k] = fm;
                ta[k] = fm * ax - visc * gx + q * len * sf;
                tb[k] = fm * ay - visc * gy - q * len * cf;
                ts[k] = 0.5 * rho_f * (f[o] - f[k]) * len;
            }
        }

        for i in 0..nr {
            let inv_area = 1.0 / g.cell_area(i);
            for j in 0..nth {
                let k = g.idx(i, j);
                let w = g.idx(i, (j + nth - 1) % nth);
                let (c, s) = (cos[j], sin[j]);
                let (cw, sw) = (geo.cos_face[(j + nth - 1) % nth], geo.sin_face[(j + nth - 1) % nth]);
                let (cf, sf) = (geo.cos_face[j], geo.sin_face[j]);
                let (im, ia, ib, is) = if i == 0 {
                    (0.0, 0.0, 0.0, 0.0)
                } else {
                    let d = g.idx(i - 1, j);
                    (rm[d], ra[d], rb[d], rs[d])
                };
                let radial_force = rs[k] + is;
                drho[k] = ((im - rm[k]) + (tm[w] - tm[k])) * inv_area;
                dmx[k] = ((ia - ra[k]) + (ta[w] - ta[k]) + radial_force * c
                    - ts[k] * sf
                    - ts[w] * sw)
                    * inv_area;
                dmy[k] = ((ib - rb[k]) + (tb[w] - tb[k]) + radial_force * s
                    + ts[k] * cf
                    + ts[w] * cw)
                    * inv_area;
            }
        }
    }
}
