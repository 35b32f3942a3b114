//! Dormand–Prince 8(5,3) with 7th-order dense output (Hairer's DOP853).

#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

use crate::error::{Error, Result};
use crate::num::Real;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;
const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;
const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;
const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;
const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;
const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dop853<T> {
    pub rtol: T,
    pub atol: T,
    /// Largest step magnitude; defaults to the span.
    pub h_max: Option<T>,
    pub max_steps: usize,
    pub dense: bool,
}

impl<T: Real> Dop853<T> {
    /// Equal relative and absolute tolerance `tol`, which must lie in `[1e-14, 1e-6]`.
    pub fn new(tol: T) -> Result<Self> {
        if !(tol >= T::lit(1e-14) && tol <= T::lit(1e-6)) {
            return Err(Error::Domain(format!("integration tolerance must lie in [1e-14, 1e-6], got {tol}")));
        }
        Ok(Self { rtol: tol, atol: tol, h_max: None, max_steps: 1_000_000, dense: true })
    }

    pub fn without_dense_output(mut self) -> Self {
        self.dense = false;
        self
    }
}

/// Per-step interpolation polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseStep<T, const N: usize> {
    pub t0: T,
    pub h: T,
    cont: [[T; N]; 8],
}

impl<T: Real, const N: usize> DenseStep<T, N> {
    pub fn eval(&self, t: T) -> [T; N] {
        let s = (t - self.t0) / self.h;
        let s1 = T::one() - s;
        let c = &self.cont;
        let mut y = [T::zero(); N];
        for i in 0..N {
            let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
            y[i] = c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s;
        }
        y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T, const N: usize> {
    /// Accepted step endpoints including the initial time.
    pub t: Vec<T>,
    pub y: Vec<[T; N]>,
    pub steps: Vec<DenseStep<T, N>>,
    pub evaluations: usize,
    pub rejected: usize,
}

impl<T: Real, const N: usize> Trajectory<T, N> {
    pub fn t_start(&self) -> T {
        self.t[0]
    }

    pub fn t_end(&self) -> T {
        *self.t.last().unwrap()
    }

    pub fn final_state(&self) -> [T; N] {
        *self.y.last().unwrap()
    }

    fn forward(&self) -> bool {
        self.t_end() >= self.t_start()
    }

    /// Index of the dense step covering `t`.
    fn step_index(&self, t: T) -> usize {
        let n = self.steps.len();
        let fwd = self.forward();
        let (mut lo, mut hi) = (0usize, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let after = if fwd { t >= self.steps[mid].t0 } else { t <= self.steps[mid].t0 };
            if after {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Dense-output state at `t`, clamped to the integrated span.
    pub fn eval(&self, t: T) -> [T; N] {
        if self.steps.is_empty() {
            return self.y[0];
        }
        self.steps[self.step_index(t)].eval(t)
    }

    /// Times in the span where `g` crosses zero, located by Brent iteration on the dense output.
    /// `direction` > 0 keeps upward crossings, < 0 downward, 0 both.
    pub fn crossings<G: Fn(&[T; N]) -> T>(&self, g: G, direction: i8) -> Vec<T> {
        let mut out = Vec::new();
        for st in &self.steps {
            let t1 = st.t0 + st.h;
            // sub-sample each step so that several crossings inside one step are still found
            let sub = 4;
            let mut ta = st.t0;
            let mut ga = g(&st.eval(ta));
            for j in 1..=sub {
                let tb = st.t0 + st.h * T::from_count(j) / T::from_count(sub);
                let tb = if j == sub { t1 } else { tb };
                let gb = g(&st.eval(tb));
                let up = ga < T::zero() && gb >= T::zero();
                let down = ga > T::zero() && gb <= T::zero();
                if (up && direction >= 0) || (down && direction <= 0) {
                    let tol = T::lit(4.0) * T::epsilon() * tb.abs().max(T::one());
                    if let Ok(tc) = crate::roots::brent(|t| g(&st.eval(t)), ta, tb, tol, 200) {
                        out.push(tc);
                    }
                }
                ta = tb;
                ga = gb;
            }
        }
        out
    }
}

fn axpy<T: Real, const N: usize>(y: &[T; N], h: T, terms: &[(f64, &[T; N])]) -> [T; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc += T::lit(*c) * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn lin<T: Real, const N: usize>(terms: &[(f64, &[T; N])]) -> [T; N] {
    let mut out = [T::zero(); N];
    for i in 0..N {
        for (c, k) in terms {
            out[i] += T::lit(*c) * k[i];
        }
    }
    out
}

fn fail<T: Real, const N: usize>(t: T, y: &[T; N], reason: impl Into<String>) -> Error {
    Error::Integration { t_last: t.as_f64(), state: y.iter().map(|v| v.as_f64()).collect(), reason: reason.into() }
}

impl<T: Real> Dop853<T> {
    /// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction).
    pub fn integrate<const N: usize, F>(&self, mut f: F, t0: T, y0: [T; N], t_end: T) -> Result<Trajectory<T, N>>
    where
        F: FnMut(T, &[T; N]) -> Result<[T; N]>,
    {
        let mut traj = Trajectory { t: vec![t0], y: vec![y0], steps: Vec::new(), evaluations: 0, rejected: 0 };
        let span = t_end - t0;
        if span == T::zero() {
            return Ok(traj);
        }
        let dir = span.signum();
        let h_max = self.h_max.unwrap_or(span.abs()).min(span.abs());
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y)?;
        traj.evaluations += 1;
        let mut h = self.initial_step(&mut f, t, &y, &k1, h_max, dir, &mut traj.evaluations)?;
        let mut last_rejected = false;
        let safe = T::lit(0.9);
        let facc1 = T::one() / T::lit(0.333);
        let facc2 = T::one() / T::lit(6.0);
        let expo = T::lit(0.125);
        let n_t = T::from_count(N);

        for _ in 0..self.max_steps {
            if (t_end - t) * dir <= T::zero() {
                return Ok(traj);
            }
            if h.abs() <= T::lit(10.0) * T::epsilon() * t.abs().max(T::one()) {
                return Err(fail(t, &y, "step size underflow"));
            }
            let mut last = false;
            if (t + h - t_end) * dir >= T::zero() {
                h = t_end - t;
                last = true;
            }
            let k2 = f(t + T::lit(C2) * h, &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = f(t + T::lit(C3) * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(t + T::lit(C4) * h, &axpy(&y, h, &[(A41, &k1), (A43, &k3)]))?;
            let k5 = f(t + T::lit(C5) * h, &axpy(&y, h, &[(A51, &k1), (A53, &k3), (A54, &k4)]))?;
            let k6 = f(t + T::lit(C6) * h, &axpy(&y, h, &[(A61, &k1), (A64, &k4), (A65, &k5)]))?;
            let k7 = f(t + T::lit(C7) * h, &axpy(&y, h, &[(A71, &k1), (A74, &k4), (A75, &k5), (A76, &k6)]))?;
            let k8 = f(
                t + T::lit(C8) * h,
                &axpy(&y, h, &[(A81, &k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
            )?;
            let k9 = f(
                t + T::lit(C9) * h,
                &axpy(&y, h, &[(A91, &k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)]),
            )?;
            let k10 = f(
                t + T::lit(C10) * h,
                &axpy(
                    &y,
                    h,
                    &[(A101, &k1), (A104, &k4), (A105, &k5), (A106, &k6), (A107, &k7), (A108, &k8), (A109, &k9)],
                ),
            )?;
            let k11 = f(
                t + T::lit(C11) * h,
                &axpy(
                    &y,
                    h,
                    &[
                        (A111, &k1),
                        (A114, &k4),
                        (A115, &k5),
                        (A116, &k6),
                        (A117, &k7),
                        (A118, &k8),
                        (A119, &k9),
                        (A1110, &k10),
                    ],
                ),
            )?;
            let t_new = t + h;
            let k12 = f(
                t_new,
                &axpy(
                    &y,
                    h,
                    &[
                        (A121, &k1),
                        (A124, &k4),
                        (A125, &k5),
                        (A126, &k6),
                        (A127, &k7),
                        (A128, &k8),
                        (A129, &k9),
                        (A1210, &k10),
                        (A1211, &k11),
                    ],
                ),
            )?;
            traj.evaluations += 11;
            let incr = lin(&[
                (B1, &k1),
                (B6, &k6),
                (B7, &k7),
                (B8, &k8),
                (B9, &k9),
                (B10, &k10),
                (B11, &k11),
                (B12, &k12),
            ]);
            let mut y_new = y;
            for i in 0..N {
                y_new[i] += h * incr[i];
            }

            let mut err = T::zero();
            let mut err2 = T::zero();
            for i in 0..N {
                let sk = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                let e2 = incr[i] - T::lit(BHH1) * k1[i] - T::lit(BHH2) * k9[i] - T::lit(BHH3) * k12[i];
                err2 += (e2 / sk) * (e2 / sk);
                let e = T::lit(ER1) * k1[i]
                    + T::lit(ER6) * k6[i]
                    + T::lit(ER7) * k7[i]
                    + T::lit(ER8) * k8[i]
                    + T::lit(ER9) * k9[i]
                    + T::lit(ER10) * k10[i]
                    + T::lit(ER11) * k11[i]
                    + T::lit(ER12) * k12[i];
                err += (e / sk) * (e / sk);
            }
            let mut deno = err + T::lit(0.01) * err2;
            if deno <= T::zero() {
                deno = T::one();
            }
            let err = h.abs() * err * (T::one() / (deno * n_t)).sqrt();
            if !err.is_finite() {
                return Err(fail(t, &y, "non-finite error estimate"));
            }
            let fac11 = err.powf(expo);
            let fac = facc2.max(facc1.min(fac11 / safe));
            let mut h_new = h / fac;

            if err <= T::one() {
                let k13 = f(t_new, &y_new)?;
                traj.evaluations += 1;
                if self.dense {
                    let step = self.dense_step(&mut f, t, h, &y, &y_new, [&k1, &k6, &k7, &k8, &k9, &k10, &k11, &k12, &k13])?;
                    traj.evaluations += 3;
                    traj.steps.push(step);
                }
                if last_rejected {
                    h_new = dir * h_new.abs().min(h.abs());
                }
                last_rejected = false;
                t = if last { t_end } else { t_new };
                y = y_new;
                k1 = k13;
                traj.t.push(t);
                traj.y.push(y);
                if last {
                    return Ok(traj);
                }
            } else {
                h_new = h / facc1.min(fac11 / safe);
                last_rejected = true;
                traj.rejected += 1;
            }
            h = dir * h_new.abs().min(h_max);
        }
        Err(fail(t, &y, "maximum step count exceeded"))
    }

    #[allow(clippy::too_many_arguments)]
    fn initial_step<const N: usize, F>(
        &self,
        f: &mut F,
        t: T,
        y: &[T; N],
        f0: &[T; N],
        h_max: T,
        dir: T,
        evals: &mut usize,
    ) -> Result<T>
    where
        F: FnMut(T, &[T; N]) -> Result<[T; N]>,
    {
        let mut dnf = T::zero();
        let mut dny = T::zero();
        for i in 0..N {
            let sk = self.atol + self.rtol * y[i].abs();
            dnf += (f0[i] / sk) * (f0[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        let mut h = if dnf <= T::lit(1e-10) || dny <= T::lit(1e-10) {
            T::lit(1e-6)
        } else {
            (dny / dnf).sqrt() * T::lit(0.01)
        };
        h = h.min(h_max) * dir;
        let mut y1 = *y;
        for i in 0..N {
            y1[i] += h * f0[i];
        }
        let f1 = f(t + h, &y1)?;
        *evals += 1;
        let mut der2 = T::zero();
        for i in 0..N {
            let sk = self.atol + self.rtol * y[i].abs();
            der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
        }
        let der2 = der2.sqrt() / h.abs();
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= T::lit(1e-15) {
            T::lit(1e-6).max(h.abs() * T::lit(1e-3))
        } else {
            (T::lit(0.01) / der12).powf(T::lit(0.125))
        };
        Ok(dir * (T::lit(100.0) * h.abs()).min(h1).min(h_max))
    }

    #[allow(clippy::too_many_arguments)]
    fn dense_step<const N: usize, F>(
        &self,
        f: &mut F,
        t: T,
        h: T,
        y: &[T; N],
        y_new: &[T; N],
        k: [&[T; N]; 9],
    ) -> Result<DenseStep<T, N>>
    where
        F: FnMut(T, &[T; N]) -> Result<[T; N]>,
    {
        let [k1, k6, k7, k8, k9, k10, k11, k12, k13] = k;
        let mut cont = [[T::zero(); N]; 8];
        for i in 0..N {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            cont[0][i] = y[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k13[i] - bspl;
        }
        let rows: [[f64; 8]; 4] = [
            [D41, D46, D47, D48, D49, D410, D411, D412],
            [D51, D56, D57, D58, D59, D510, D511, D512],
            [D61, D66, D67, D68, D69, D610, D611, D612],
            [D71, D76, D77, D78, D79, D710, D711, D712],
        ];
        let base = [k1, k6, k7, k8, k9, k10, k11, k12];
        for (r, row) in rows.iter().enumerate() {
            for i in 0..N {
                let mut acc = T::zero();
                for (c, kk) in row.iter().zip(base.iter()) {
                    acc += T::lit(*c) * kk[i];
                }
                cont[4 + r][i] = acc;
            }
        }
        let k14 = f(
            t + T::lit(C14) * h,
            &axpy(
                y,
                h,
                &[
                    (A141, k1),
                    (A147, k7),
                    (A148, k8),
                    (A149, k9),
                    (A1410, k10),
                    (A1411, k11),
                    (A1412, k12),
                    (A1413, k13),
                ],
            ),
        )?;
        let k15 = f(
            t + T::lit(C15) * h,
            &axpy(
                y,
                h,
                &[
                    (A151, k1),
                    (A156, k6),
                    (A157, k7),
                    (A158, k8),
                    (A1511, k11),
                    (A1512, k12),
                    (A1513, k13),
                    (A1514, &k14),
                ],
            ),
        )?;
        let k16 = f(
            t + T::lit(C16) * h,
            &axpy(
                y,
                h,
                &[
                    (A161, k1),
                    (A166, k6),
                    (A167, k7),
                    (A168, k8),
                    (A169, k9),
                    (A1613, k13),
                    (A1614, &k14),
                    (A1615, &k15),
                ],
            ),
        )?;
        let tails: [[f64; 4]; 4] =
            [[D413, D414, D415, D416], [D513, D514, D515, D516], [D613, D614, D615, D616], [D713, D714, D715, D716]];
        for (r, tail) in tails.iter().enumerate() {
            for i in 0..N {
                let extra = T::lit(tail[0]) * k13[i]
                    + T::lit(tail[1]) * k14[i]
                    + T::lit(tail[2]) * k15[i]
                    + T::lit(tail[3]) * k16[i];
                cont[4 + r][i] = h * (cont[4 + r][i] + extra);
            }
        }
        Ok(DenseStep { t0: t, h, cont })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], -y[0]])
    }

    #[test]
    fn harmonic_oscillator_accuracy() {
        let s = Dop853::new(1e-12).unwrap();
        let tr = s.integrate(oscillator, 0.0, [1.0, 0.0], 20.0).unwrap();
        let y = tr.final_state();
        assert!((y[0] - 20f64.cos()).abs() < 1e-10 && (y[1] + 20f64.sin()).abs() < 1e-10);
        for i in 0..200 {
            let t = i as f64 * 0.1;
            let d = tr.eval(t);
            assert!((d[0] - t.cos()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn backward_and_zero_span() {
        let s = Dop853::new(1e-10).unwrap();
        let tr = s.integrate(oscillator, 1.0, [1.0_f64.cos(), -1.0_f64.sin()], -2.0).unwrap();
        let y = tr.final_state();
        assert!((y[0] - 2f64.cos()).abs() < 1e-8);
        let z = s.integrate(oscillator, 3.0, [0.25, -0.5], 3.0).unwrap();
        assert_eq!(z.final_state(), [0.25, -0.5]);
        assert_eq!(z.eval(3.0), [0.25, -0.5]);
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Dop853::new(1e-15_f64).is_err());
        assert!(Dop853::new(1e-5_f64).is_err());
        assert!(Dop853::new(1e-6_f64).is_ok());
    }

    #[test]
    fn crossings_of_sine() {
        let s = Dop853::new(1e-12).unwrap();
        let tr = s.integrate(oscillator, 0.0, [0.0, 1.0], 10.0).unwrap();
        let up = tr.crossings(|y| y[0], 1);
        let down = tr.crossings(|y| y[0], -1);
        let pi = std::f64::consts::PI;
        assert_eq!(down.len(), 2);
        assert!((down[0] - pi).abs() < 1e-11 && (down[1] - 3.0 * pi).abs() < 1e-11);
        assert_eq!(up.len(), 1);
        assert!((up[0] - 2.0 * pi).abs() < 1e-11);
    }

    #[test]
    fn failure_reports_last_time() {
        let s = Dop853::new(1e-10).unwrap();
        let r = s.integrate(
            |t: f64, _y: &[f64; 1]| if t > 0.5 { Err(Error::Domain("stop".into())) } else { Ok([1.0]) },
            0.0,
            [0.0],
            1.0,
        );
        assert!(r.is_err());
        let blow = s.integrate(|_t, y: &[f64; 1]| Ok([y[0] * y[0]]), 0.0, [1.0], 2.0);
        match blow {
            Err(Error::Integration { t_last, reason, .. }) => assert!((t_last - 1.0).abs() < 1e-6, "{t_last} {reason}"),
            other => panic!("{:?}", other.map(|t| t.t_end())),
        }
    }

    #[test]
    fn f32_instance() {
        let s = Dop853::<f32> { rtol: 1e-6, atol: 1e-6, h_max: None, max_steps: 100_000, dense: true };
        let tr = s.integrate(|_t, y: &[f32; 2]| Ok([y[1], -y[0]]), 0.0, [1.0, 0.0], 3.0).unwrap();
        assert!((tr.final_state()[0] - 3f32.cos()).abs() < 1e-4);
    }
}
