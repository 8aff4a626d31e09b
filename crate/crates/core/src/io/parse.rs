//! Expression parser for functions and operators. The grammar covers rational
//! literals, `x`, `xi`, `theta<k>`, `exp(<rational>*x)`, `D`, the operators
//! `+ - * / ^` and parentheses. Multiplication in operator context is
//! noncommutative composition; a top-level expression containing `D` parses
//! as an operator, anything else as a function.

use super::IoError;
use crate::funcring::{OddContext, Rat, SuperFn};
use crate::superop::SuperOp;
use num::{BigInt, One, Zero};

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, IoError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(IoError::Syntax {
                    message: format!("unexpected character '{}'", c),
                    position: i,
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    ctx: OddContext,
    saw_d: bool,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(_, p)| *p).unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), IoError> {
        let pos = self.pos();
        match self.bump() {
            Some(found) if found == t => Ok(()),
            _ => Err(IoError::Syntax {
                message: format!("expected {}", what),
                position: pos,
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<SuperOp, IoError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = acc.checked_add(&rhs)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = acc.checked_sub(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<SuperOp, IoError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = acc.checked_mul(&rhs)?;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.parse_factor()?;
                    let denom = match rhs.deg() {
                        Some(0) => rhs.coeff(0),
                        _ => {
                            return Err(IoError::NonInvertibleDenominator { position: pos })
                        }
                    };
                    if !denom.is_invertible() {
                        return Err(IoError::NonInvertibleDenominator { position: pos });
                    }
                    let inv = SuperOp::from_fn(denom.invert().expect("invertible"));
                    acc = acc.checked_mul(&inv)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<SuperOp, IoError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let inner = self.parse_factor()?;
            return Ok(inner.neg());
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<SuperOp, IoError> {
        let base = self.parse_atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            let pos = self.pos();
            self.bump();
            let e_pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let Ok(k) = u32::try_from(&n) else {
                        return Err(IoError::Syntax {
                            message: "exponent too large".into(),
                            position: e_pos,
                        });
                    };
                    if k > MAX_EXPONENT {
                        return Err(IoError::Syntax {
                            message: "exponent too large".into(),
                            position: e_pos,
                        });
                    }
                    return Ok(base.pow(k as usize));
                }
                _ => {
                    return Err(IoError::Syntax {
                        message: "expected a nonnegative integer exponent".into(),
                        position: pos,
                    })
                }
            }
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<SuperOp, IoError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(SuperOp::from_fn(SuperFn::constant(
                self.ctx,
                Rat::from_integer(n),
            ))),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(SuperOp::from_fn(SuperFn::x(self.ctx))),
                "xi" => Ok(SuperOp::from_fn(SuperFn::xi(self.ctx))),
                "D" => {
                    self.saw_d = true;
                    Ok(SuperOp::d(self.ctx))
                }
                "exp" => {
                    self.expect(Tok::LParen, "'(' after exp")?;
                    let freq = self.parse_exp_arg()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(SuperOp::from_fn(SuperFn::exp(self.ctx, freq)))
                }
                _ => {
                    if let Some(idx) = name.strip_prefix("theta") {
                        let Ok(k) = idx.parse::<usize>() else {
                            return Err(IoError::Syntax {
                                message: format!("bad theta index in '{}'", name),
                                position: pos,
                            });
                        };
                        if k == 0 || k > self.ctx.n {
                            return Err(IoError::UnknownGenerator {
                                index: k,
                                max: self.ctx.n,
                                position: pos,
                            });
                        }
                        Ok(SuperOp::from_fn(
                            SuperFn::theta(self.ctx, k).expect("validated"),
                        ))
                    } else {
                        Err(IoError::Syntax {
                            message: format!("unknown identifier '{}'", name),
                            position: pos,
                        })
                    }
                }
            },
            _ => Err(IoError::Syntax {
                message: "expected an expression".into(),
                position: pos,
            }),
        }
    }

    /// `exp` argument: `[-] [int [/ int] *] x`.
    fn parse_exp_arg(&mut self) -> Result<Rat, IoError> {
        let mut sign = Rat::one();
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            sign = -sign;
        }
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(ref s)) if s == "x" => Ok(sign),
            Some(Tok::Int(n)) => {
                let mut r = Rat::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            r /= Rat::from_integer(d);
                        }
                        _ => {
                            return Err(IoError::Syntax {
                                message: "expected a nonzero integer denominator".into(),
                                position: dpos,
                            })
                        }
                    }
                }
                self.expect(Tok::Star, "'*' in exp argument")?;
                let xpos = self.pos();
                match self.bump() {
                    Some(Tok::Ident(ref s)) if s == "x" => Ok(sign * r),
                    _ => Err(IoError::Syntax {
                        message: "expected 'x' in exp argument".into(),
                        position: xpos,
                    }),
                }
            }
            _ => Err(IoError::Syntax {
                message: "expected a rational multiple of x".into(),
                position: pos,
            }),
        }
    }
}

fn parse(text: &str, ctx: OddContext) -> Result<(SuperOp, bool), IoError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        ctx,
        saw_d: false,
        len: text.len(),
    };
    let op = p.parse_expr()?;
    if p.i != p.toks.len() {
        return Err(IoError::Syntax {
            message: "unexpected trailing input".into(),
            position: p.pos(),
        });
    }
    Ok((op, p.saw_d))
}

pub fn parse_operator(text: &str, ctx: OddContext) -> Result<SuperOp, IoError> {
    Ok(parse(text, ctx)?.0)
}

pub fn parse_function(text: &str, ctx: OddContext) -> Result<SuperFn, IoError> {
    let (op, saw_d) = parse(text, ctx)?;
    if saw_d {
        return Err(IoError::OperatorInFunctionContext);
    }
    debug_assert!(op.deg().is_none_or(|d| d == 0));
    Ok(op.coeff(0))
}
