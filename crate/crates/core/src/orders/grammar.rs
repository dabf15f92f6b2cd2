//! Order-expression grammar:
//! `0 | fin(n) | N | -N | Z | (e . e) | (e * e) | label(name[, key=value]*)`.

use super::{Countability, LabelFlags, LinearOrder, OrderError, TriBool};

pub fn parse_order(text: &str) -> Result<LinearOrder, OrderError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let order = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("end of order expression"));
    }
    Ok(order)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, expected: &str) -> OrderError {
        OrderError::Syntax {
            column: self.pos + 1,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), OrderError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, ',' | '(' | ')' | '=') {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expr(&mut self) -> Result<LinearOrder, OrderError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let left = self.expr()?;
                self.skip_ws();
                let op = self.peek();
                if !matches!(op, Some('.') | Some('*')) {
                    return Err(self.error("'.' or '*'"));
                }
                self.pos += 1;
                let right = self.expr()?;
                self.expect(')')?;
                Ok(if op == Some('.') {
                    LinearOrder::concat(left, right)
                } else {
                    LinearOrder::lex(left, right)
                })
            }
            Some('-') => {
                self.pos += 1;
                if self.word() == "N" {
                    Ok(LinearOrder::NatDown)
                } else {
                    Err(self.error("'N' after '-'"))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let w = self.word();
                if w == "0" {
                    Ok(LinearOrder::Fin(0))
                } else {
                    Err(self.error("'0' (use fin(n) for other finite chains)"))
                }
            }
            Some(_) => {
                let save = self.pos;
                let w = self.word();
                match w.as_str() {
                    "N" => Ok(LinearOrder::NatUp),
                    "Z" => Ok(LinearOrder::Ints),
                    "fin" => {
                        self.expect('(')?;
                        let digits = self.word();
                        let n = digits.parse::<u64>().map_err(|_| self.error("a count"))?;
                        self.expect(')')?;
                        Ok(LinearOrder::Fin(n))
                    }
                    "label" => self.label(),
                    _ => {
                        self.pos = save;
                        Err(self.error("an order expression"))
                    }
                }
            }
            None => Err(self.error("an order expression")),
        }
    }

    fn label(&mut self) -> Result<LinearOrder, OrderError> {
        self.expect('(')?;
        let name = self.name();
        if name.is_empty() {
            return Err(self.error("a label name"));
        }
        let mut flags = LabelFlags::default();
        while self.eat(',') {
            let key = self.word();
            self.expect('=')?;
            let value = self.word();
            match key.as_str() {
                "cofinal" => flags.cofinality = self.countability(&value)?,
                "coinitial" => flags.coinitiality = self.countability(&value)?,
                "discrete" => {
                    flags.locally_discrete = match value.as_str() {
                        "true" => TriBool::True,
                        "false" => TriBool::False,
                        "unknown" => TriBool::Unknown,
                        _ => return Err(self.error("true, false or unknown")),
                    }
                }
                _ => return Err(self.error("cofinal, coinitial or discrete")),
            }
        }
        self.expect(')')?;
        Ok(LinearOrder::Labeled { name, flags })
    }

    fn countability(&self, value: &str) -> Result<Countability, OrderError> {
        match value {
            "countable" => Ok(Countability::Countable),
            "uncountable" => Ok(Countability::Uncountable),
            "unknown" => Ok(Countability::Unknown),
            _ => Err(self.error("countable, uncountable or unknown")),
        }
    }
}
