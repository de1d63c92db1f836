//! Brute-force reference implementations, independent of the library:
//! plain nested `Vec`s of `Complex64`, explicit Kronecker products and
//! textbook gate matrices.
#![allow(dead_code)]

use num_complex::Complex64 as Z;

pub type Mat = Vec<Vec<Z>>;
pub type Vector = Vec<Z>;

pub fn z(re: f64, im: f64) -> Z {
    Z::new(re, im)
}

pub fn zeros(d: usize) -> Mat {
    vec![vec![z(0.0, 0.0); d]; d]
}

pub fn eye(d: usize) -> Mat {
    let mut m = zeros(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = z(1.0, 0.0);
    }
    m
}

pub fn pauli(ch: char) -> Mat {
    match ch {
        'I' | '1' => eye(2),
        'X' => vec![
            vec![z(0.0, 0.0), z(1.0, 0.0)],
            vec![z(1.0, 0.0), z(0.0, 0.0)],
        ],
        'Y' => vec![
            vec![z(0.0, 0.0), z(0.0, -1.0)],
            vec![z(0.0, 1.0), z(0.0, 0.0)],
        ],
        'Z' => vec![
            vec![z(1.0, 0.0), z(0.0, 0.0)],
            vec![z(0.0, 0.0), z(-1.0, 0.0)],
        ],
        _ => panic!("not a Pauli label: {ch}"),
    }
}

pub fn hadamard() -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![z(h, 0.0), z(h, 0.0)], vec![z(h, 0.0), z(-h, 0.0)]]
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn kron_all(ms: &[Mat]) -> Mat {
    ms.iter().fold(eye(1), |acc, m| kron(&acc, m))
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut out = zeros(d);
    for i in 0..d {
        for k in 0..d {
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn scale(a: &Mat, s: Z) -> Mat {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

pub fn dagger(a: &Mat) -> Mat {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| a[j][i].conj()).collect())
        .collect()
}

pub fn matvec(a: &Mat, v: &Vector) -> Vector {
    a.iter()
        .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn inner(a: &Vector, b: &Vector) -> Z {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn expect(op: &Mat, v: &Vector) -> Z {
    inner(v, &matvec(op, v))
}

pub fn trace(a: &Mat) -> Z {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn expect_rho(op: &Mat, rho: &Mat) -> Z {
    trace(&mul(rho, op))
}

pub fn outer(v: &Vector) -> Mat {
    v.iter()
        .map(|a| v.iter().map(|b| a * b.conj()).collect())
        .collect()
}

pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Operator of a label such as `X11X` (`1` or `I` for identity).
pub fn string_op(label: &str) -> Mat {
    kron_all(&label.chars().map(pauli).collect::<Vec<_>>())
}

/// Vector with amplitude `a` on each listed bit string.
pub fn ket(n: usize, terms: &[(&str, Z)]) -> Vector {
    let mut v = vec![z(0.0, 0.0); 1 << n];
    for (bits, a) in terms {
        v[usize::from_str_radix(bits, 2).unwrap()] += *a;
    }
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

pub fn phased_dicke_ref() -> Vector {
    let p = z(1.0, 0.0);
    let m = z(-1.0, 0.0);
    ket(
        4,
        &[
            ("0011", p),
            ("1100", p),
            ("0110", p),
            ("1001", p),
            ("0101", m),
            ("1010", m),
        ],
    )
}

pub fn symmetric_dicke_ref() -> Vector {
    let p = z(1.0, 0.0);
    ket(
        4,
        &[
            ("0011", p),
            ("1100", p),
            ("0110", p),
            ("1001", p),
            ("0101", p),
            ("1010", p),
        ],
    )
}

pub fn xi_ref() -> Vector {
    ket(
        4,
        &[
            ("0010", z(1.0, 0.0)),
            ("1000", z(-1.0, 0.0)),
            ("0111", z(2.0, 0.0)),
        ],
    )
}

fn proj(bit: u8) -> Mat {
    let mut m = zeros(2);
    m[bit as usize][bit as usize] = z(1.0, 0.0);
    m
}

/// Single-qubit gate `g` on 0-based slot `q` of `n`.
pub fn on(n: usize, q: usize, g: &Mat) -> Mat {
    kron_all(
        &(0..n)
            .map(|i| if i == q { g.clone() } else { eye(2) })
            .collect::<Vec<_>>(),
    )
}

/// `|v⟩⟨v|_c ⊗ g_t` plus identity on the other control value.
pub fn controlled(n: usize, c: usize, t: usize, value: u8, g: &Mat) -> Mat {
    let parts = |cm: Mat, tm: Mat| {
        kron_all(
            &(0..n)
                .map(|i| {
                    if i == c {
                        cm.clone()
                    } else if i == t {
                        tm.clone()
                    } else {
                        eye(2)
                    }
                })
                .collect::<Vec<_>>(),
        )
    };
    add(
        &parts(proj(value), g.clone()),
        &parts(proj(1 - value), eye(2)),
    )
}

/// `Z₄ CZ̄₁₂ CZ̄₃₄ CX₁₂ CX₃₄ H₁ H₃` with CZ̄ = Z on the target when the control is 0.
pub fn reference_circuit(with_compensation: bool) -> Mat {
    let x = pauli('X');
    let zz = pauli('Z');
    let mut gates = vec![
        on(4, 0, &hadamard()),
        on(4, 2, &hadamard()),
        controlled(4, 2, 3, 1, &x),
        controlled(4, 0, 1, 1, &x),
    ];
    if with_compensation {
        gates.push(controlled(4, 2, 3, 0, &zz));
        gates.push(controlled(4, 0, 1, 0, &zz));
    }
    gates.push(on(4, 3, &zz));
    gates.iter().fold(eye(16), |acc, g| mul(g, &acc))
}

/// `|⟨a|b⟩|²`.
pub fn overlap(a: &Vector, b: &Vector) -> f64 {
    inner(a, b).norm_sqr()
}

/// Rank of an `r × c` matrix by Gaussian elimination with partial pivoting.
pub fn rank(mut m: Vec<Vec<Z>>, tol: f64) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) =
            (r..rows).max_by(|&a, &b| m[a][col].norm().partial_cmp(&m[b][col].norm()).unwrap())
        else {
            break;
        };
        if m[piv][col].norm() < tol {
            continue;
        }
        m.swap(r, piv);
        for i in 0..rows {
            if i != r {
                let f = m[i][col] / m[r][col];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Coefficient matrix of `v` across the split `left | rest` of 0-based slots.
pub fn schmidt_matrix(v: &Vector, n: usize, left: &[usize]) -> Vec<Vec<Z>> {
    let right: Vec<usize> = (0..n).filter(|q| !left.contains(q)).collect();
    let mut m = vec![vec![z(0.0, 0.0); 1 << right.len()]; 1 << left.len()];
    for (idx, a) in v.iter().enumerate() {
        let bit = |q: usize| (idx >> (n - 1 - q)) & 1;
        let r = left.iter().fold(0, |acc, &q| (acc << 1) | bit(q));
        let c = right.iter().fold(0, |acc, &q| (acc << 1) | bit(q));
        m[r][c] = *a;
    }
    m
}
