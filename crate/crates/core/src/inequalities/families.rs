use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::{CorrelationExpression, ExprError};

/// Correlation facet with local bound 1 built from a sign function
/// S: {+1,-1}^n -> {+1,-1}. Entry k of `signs` is S(s) where bit (n-1-i) of k
/// set means s_i = -1, so (+,+,..) comes first.
pub fn ww_zb_facet(signs: &[i8]) -> Result<CorrelationExpression, ExprError> {
    let n = signs.len().trailing_zeros() as usize;
    if signs.is_empty() || 1 << n != signs.len() || signs.iter().any(|s| s.abs() != 1) {
        return Err(ExprError::IncompleteSignTable {
            got: signs.len(),
            expected: signs.len().next_power_of_two(),
        });
    }
    let scale = 1.0 / (1u64 << n) as f64;
    Ok(CorrelationExpression::from_fn(format!("facet{n}"), vec![2; n], |x| {
        let total: i64 = (0..signs.len())
            .map(|k| {
                let mut term = signs[k] as i64;
                for (i, &xi) in x.iter().enumerate() {
                    let minus = k >> (n - 1 - i) & 1 == 1;
                    if minus && xi == 1 {
                        term = -term;
                    }
                }
                term
            })
            .sum();
        total as f64 * scale
    }))
}

/// A1B1 + A2B1 + A1B2 - A2B2.
pub fn chsh() -> CorrelationExpression {
    CorrelationExpression::new("chsh", vec![2, 2], vec![1.0, 1.0, 1.0, -1.0]).unwrap()
}

/// -A1B1C1 + A1B2C2 + A2B1C2 + A2B2C1.
pub fn mermin3() -> CorrelationExpression {
    CorrelationExpression::from_fn("mermin3", vec![2, 2, 2], |x| match (x[0], x[1], x[2]) {
        (0, 0, 0) => -1.0,
        (0, 1, 1) | (1, 0, 1) | (1, 1, 0) => 1.0,
        _ => 0.0,
    })
}

fn tilde(c: &[Rational64]) -> Vec<Rational64> {
    // Swapping inputs 0 <-> 1 on every party complements every bit of the flat index.
    let mask = c.len() - 1;
    (0..c.len()).map(|k| c[k ^ mask]).collect()
}

/// M_1 = A_1, M_n = ½ M_{n-1}(A_1 + A_2) + ½ M̃_{n-1}(A_1 - A_2).
pub fn mermin_klyshko_exact(n: usize) -> Result<Vec<Rational64>, ExprError> {
    if !(1..=6).contains(&n) {
        return Err(ExprError::NOutOfRange(n));
    }
    let half = Rational64::new(1, 2);
    let mut m = vec![Rational64::from_integer(1), Rational64::zero()];
    for _ in 1..n {
        let t = tilde(&m);
        let mut next = Vec::with_capacity(2 * m.len());
        for (a, b) in m.iter().zip(&t) {
            next.push(half * (a + b));
            next.push(half * (a - b));
        }
        m = next;
    }
    Ok(m)
}

/// S_n = M_n for even n and (M_n + M̃_n)/2 for odd n.
pub fn svetlichny_exact(n: usize) -> Result<Vec<Rational64>, ExprError> {
    let m = mermin_klyshko_exact(n)?;
    if n % 2 == 0 {
        return Ok(m);
    }
    let t = tilde(&m);
    Ok(m.iter().zip(&t).map(|(a, b)| (a + b) / 2).collect())
}

fn from_rationals(name: String, n: usize, c: &[Rational64]) -> CorrelationExpression {
    let coeffs = c.iter().map(|r| r.to_f64().expect("dyadic")).collect();
    CorrelationExpression::new(name, vec![2; n], coeffs).unwrap()
}

pub fn mermin_klyshko(n: usize) -> Result<CorrelationExpression, ExprError> {
    Ok(from_rationals(format!("mk{n}"), n, &mermin_klyshko_exact(n)?))
}

pub fn svetlichny(n: usize) -> Result<CorrelationExpression, ExprError> {
    Ok(from_rationals(format!("svetlichny{n}"), n, &svetlichny_exact(n)?))
}

/// t_l for the chain matrix, with l = y - x in -(m-1)..=(m-1).
fn chain_t(m: i64, l: i64) -> i64 {
    let h = m / 2;
    if l.abs() <= h - 1 || l == h {
        1
    } else {
        -1
    }
}

/// m-input chain expression, C_{x,y} = t_{y-x}.
pub fn chain(m: usize) -> Result<CorrelationExpression, ExprError> {
    if m < 2 || m % 2 == 1 {
        return Err(ExprError::OddM(m));
    }
    Ok(CorrelationExpression::from_fn(format!("chain{m}"), vec![m, m], |x| {
        chain_t(m as i64, x[1] as i64 - x[0] as i64) as f64
    }))
}

/// The m²/4 CHSH blocks
/// A_{j+l}(B_j + B_{j+m/2}) + A_{j+l+m/2}(B_{j+m/2} - B_j), j, l in 0..m/2,
/// with A_{x+m} = -A_x.
pub fn decompose_chain_to_chsh(m: usize) -> Result<Vec<CorrelationExpression>, ExprError> {
    if m < 2 || m % 2 == 1 {
        return Err(ExprError::OddM(m));
    }
    let h = m / 2;
    let mut out = Vec::with_capacity(h * h);
    for j in 0..h {
        for l in 0..h {
            let mut c = vec![0.0; m * m];
            let mut put = |a: usize, b: usize, v: f64| {
                let (a, s) = if a >= m { (a - m, -1.0) } else { (a, 1.0) };
                c[a * m + b] += s * v;
            };
            put(j + l, j, 1.0);
            put(j + l, j + h, 1.0);
            put(j + l + h, j + h, 1.0);
            put(j + l + h, j, -1.0);
            out.push(CorrelationExpression::new(format!("chsh-block-{j}-{l}"), vec![m, m], c)?);
        }
    }
    Ok(out)
}

/// ±1 tensor depending on d = x_n - x_{n-1} + x_{n-2} - .. (0-based) through
/// C = (-1)^q G(r) with d = qm + r and G(r) = -1 exactly when r <= m/2.
pub fn gen_svetlichny(n: usize, m: usize) -> Result<CorrelationExpression, ExprError> {
    if n < 2 {
        return Err(ExprError::NOutOfRange(n));
    }
    if m < 2 || m % 2 == 1 {
        return Err(ExprError::OddM(m));
    }
    let size = (m as f64).powi(n as i32);
    if size > 1e6 {
        return Err(ExprError::SizeGuard(size as usize));
    }
    let mi = m as i64;
    Ok(CorrelationExpression::from_fn(format!("gensvet{n}x{m}"), vec![m; n], |x| {
        let d: i64 = x
            .iter()
            .enumerate()
            .map(|(i, &xi)| if (n - 1 - i) % 2 == 0 { xi as i64 } else { -(xi as i64) })
            .sum();
        let q = d.div_euclid(mi);
        let r = d.rem_euclid(mi);
        let g = if r <= mi / 2 { -1.0 } else { 1.0 };
        if q % 2 == 0 {
            g
        } else {
            -g
        }
    }))
}

/// Two rows per edge (u < v): (+1 at u, -1 at v) and (+1 at u, +1 at v),
/// all scaled by 1/(4e). Columns are vertices.
pub fn slofstra_game(n_vertices: usize, edges: &[(usize, usize)]) -> Result<CorrelationExpression, ExprError> {
    if edges.is_empty() {
        return Err(ExprError::EmptyGraph);
    }
    let w = 1.0 / (4.0 * edges.len() as f64);
    let mut c = vec![0.0; 2 * edges.len() * n_vertices];
    for (k, &(a, b)) in edges.iter().enumerate() {
        let (u, v) = (a.min(b), a.max(b));
        c[2 * k * n_vertices + u] = w;
        c[2 * k * n_vertices + v] = -w;
        c[(2 * k + 1) * n_vertices + u] = w;
        c[(2 * k + 1) * n_vertices + v] = w;
    }
    CorrelationExpression::new("slofstra", vec![2 * edges.len(), n_vertices], c)
}
