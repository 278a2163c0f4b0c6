//! Arithmetic over complex numbers for command-line values.
//!
//! Accepts decimal literals, `pi`, `i`, `sqrt(…)`, the four operators,
//! unary signs, parentheses and implicit multiplication (`2pi`, `0.6i`).

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // exponent only when followed by a digit, so `2e` stays an error
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let text: String = chars[start..k].iter().collect();
            let v = text.parse::<f64>().map_err(|_| format!("bad number `{text}`"))?;
            out.push(Tok::Num(v));
        } else if ch.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*/".contains(ch) {
            out.push(Tok::Op(ch));
            k += 1;
        } else if ch == '(' {
            out.push(Tok::Open);
            k += 1;
        } else if ch == ')' {
            out.push(Tok::Close);
            k += 1;
        } else {
            return Err(format!("unexpected character `{ch}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Complex64, String> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Complex64, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.norm_sqr() == 0.0 {
                        return Err("division by zero".into());
                    }
                    acc /= d;
                }
                Some(Tok::Ident(_)) | Some(Tok::Open) => acc *= self.primary()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64, String> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Complex64, String> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Complex64::new(v, 0.0)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "pi" => Ok(Complex64::new(std::f64::consts::PI, 0.0)),
                "i" => Ok(Complex64::i()),
                "sqrt" => {
                    if self.next() != Some(Tok::Open) {
                        return Err("sqrt needs parentheses".into());
                    }
                    let v = self.expr()?;
                    self.close()?;
                    Ok(if v.im == 0.0 && v.re >= 0.0 {
                        Complex64::new(v.re.sqrt(), 0.0)
                    } else {
                        v.sqrt()
                    })
                }
                other => Err(format!("unknown name `{other}`")),
            },
            Some(Tok::Open) => {
                let v = self.expr()?;
                self.close()?;
                Ok(v)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn close(&mut self) -> Result<(), String> {
        match self.next() {
            Some(Tok::Close) => Ok(()),
            _ => Err("missing `)`".into()),
        }
    }
}

pub fn eval_complex(src: &str) -> Result<Complex64, String> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in `{src}`"));
    }
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(format!("`{src}` is not finite"));
    }
    Ok(v)
}

pub fn eval_real(src: &str) -> Result<f64, String> {
    let v = eval_complex(src)?;
    if v.im != 0.0 {
        return Err(format!("`{src}` must be real"));
    }
    Ok(v.re)
}
