//! Vector expressions for command-line arguments and model files.
//!
//! Two input shapes: plain coordinates (`0.3, 0, 1`) whenever a comma is
//! present, or symbolic combinations of basis labels otherwise, e.g.
//! `0.4*e4`, `e1 - 0.5*e3`, `(e2+e4)/√2`. The `sqrt(k)` spelling works
//! where the radical sign is awkward to type. Basis labels are 1-based.

use finsler_core::Vector;

/// Parse failure, with a 1-based character column into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub col: usize,
    pub message: String,
}

impl ExprError {
    fn new(col: usize, message: impl Into<String>) -> Self {
        ExprError {
            col,
            message: message.into(),
        }
    }
}

pub fn parse_vector(input: &str, dim: usize) -> Result<Vector, ExprError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(ExprError::new(1, "empty vector expression"));
    }
    if trimmed.contains(',') {
        return parse_csv(input, dim);
    }
    // A lone number is unambiguous only in one dimension.
    if dim == 1 {
        if let Ok(value) = trimmed.parse::<f64>() {
            return Ok(Vector::new(vec![value]));
        }
    }
    let mut cursor = Cursor::new(input);
    let v = cursor.sum(dim)?;
    cursor.skip_ws();
    if let Some(c) = cursor.peek() {
        return Err(cursor.err(format!("unexpected `{c}` after expression")));
    }
    Ok(v)
}

fn parse_csv(input: &str, dim: usize) -> Result<Vector, ExprError> {
    let mut coords = Vec::new();
    let mut col = 1usize;
    for piece in input.split(',') {
        let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
        let body = piece.trim();
        if body.is_empty() {
            return Err(ExprError::new(col + lead, "missing coordinate"));
        }
        match body.parse::<f64>() {
            Ok(v) if v.is_finite() => coords.push(v),
            _ => {
                return Err(ExprError::new(
                    col + lead,
                    format!("`{body}` is not a finite number"),
                ))
            }
        }
        col += piece.chars().count() + 1;
    }
    if coords.len() != dim {
        return Err(ExprError::new(
            1,
            format!("expected {dim} coordinates, found {}", coords.len()),
        ));
    }
    Ok(Vector::new(coords))
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(input: &str) -> Self {
        Cursor {
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError::new(self.pos + 1, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self, dim: usize) -> Result<Vector, ExprError> {
        self.skip_ws();
        let mut sign = 1.0;
        if self.eat('-') {
            sign = -1.0;
        } else {
            self.eat('+');
        }
        let mut acc = self.term(dim)?.scale(sign);
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some('+') => 1.0,
                Some('-') => -1.0,
                _ => break,
            };
            self.bump();
            let term = self.term(dim)?;
            acc = acc.add_scaled(sign, &term);
        }
        Ok(acc)
    }

    /// `[coefficient *] atom [/ divisor]`.
    fn term(&mut self, dim: usize) -> Result<Vector, ExprError> {
        self.skip_ws();
        let mut coef = 1.0;
        if self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == '.')
        {
            coef = self.number()?;
            self.skip_ws();
            if !self.eat('*') {
                return Err(self.err("a coefficient must be followed by `*`"));
            }
            self.skip_ws();
        }
        let mut v = self.atom(dim)?.scale(coef);
        self.skip_ws();
        if self.eat('/') {
            let d = self.divisor()?;
            if d == 0.0 {
                return Err(self.err("division by zero"));
            }
            v = v.scale(1.0 / d);
        }
        Ok(v)
    }

    fn atom(&mut self, dim: usize) -> Result<Vector, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.sum(dim)?;
                self.skip_ws();
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some('e') => self.basis_label(dim),
            Some(c) => Err(self.err(format!(
                "expected a basis label, `(`, or coefficient, found `{c}`"
            ))),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn basis_label(&mut self, dim: usize) -> Result<Vector, ExprError> {
        let start = self.pos;
        self.bump(); // 'e'
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(ExprError::new(start + 1, "basis label needs an index, like e1"));
        }
        let index: usize = digits
            .parse()
            .map_err(|_| ExprError::new(start + 1, "basis index out of range"))?;
        if index == 0 || index > dim {
            return Err(ExprError::new(
                start + 1,
                format!("basis index e{index} outside 1..={dim}"),
            ));
        }
        Ok(Vector::basis(dim, index - 1).expect("index validated"))
    }

    /// After `/`: a number, `√k`, or `sqrt(k)`.
    fn divisor(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some('√') => {
                self.bump();
                self.skip_ws();
                Ok(self.number()?.sqrt())
            }
            Some('s') => {
                for expected in "sqrt".chars() {
                    if !self.eat(expected) {
                        return Err(self.err("expected `sqrt`"));
                    }
                }
                self.skip_ws();
                if !self.eat('(') {
                    return Err(self.err("expected `(` after sqrt"));
                }
                let k = self.number()?;
                self.skip_ws();
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(k.sqrt())
            }
            _ => self.number(),
        }
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == '.')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map_err(|_| ExprError::new(start + 1, format!("`{text}` is not a number")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn csv_coordinates() {
        let v = parse_vector("0.3, 0, 1", 3).unwrap();
        assert_eq!(v.coords(), &[0.3, 0.0, 1.0]);
        assert!(parse_vector("1, 2", 3).is_err());
        assert!(parse_vector("1, x, 3", 3).is_err());
    }

    #[test]
    fn labels_and_coefficients() {
        assert_eq!(parse_vector("e2", 3).unwrap().coords(), &[0.0, 1.0, 0.0]);
        assert_eq!(
            parse_vector("0.4*e4", 4).unwrap().coords(),
            &[0.0, 0.0, 0.0, 0.4]
        );
        assert_eq!(
            parse_vector("e1 - 0.5*e3", 3).unwrap().coords(),
            &[1.0, 0.0, -0.5]
        );
        assert_eq!(parse_vector("-e2", 2).unwrap().coords(), &[0.0, -1.0]);
    }

    #[test]
    fn radicals_both_spellings() {
        let s = 0.5f64.sqrt();
        let v = parse_vector("(e2+e4)/√2", 4).unwrap();
        assert_abs_diff_eq!(v.get(1), s);
        assert_abs_diff_eq!(v.get(3), s);
        let w = parse_vector("(e2+e4)/sqrt(2)", 4).unwrap();
        assert_eq!(v.coords(), w.coords());
    }

    #[test]
    fn single_number_only_in_dim_one() {
        assert_eq!(parse_vector("0.5", 1).unwrap().coords(), &[0.5]);
        assert!(parse_vector("0.5", 3).is_err());
    }

    #[test]
    fn error_columns_point_at_the_problem() {
        let e = parse_vector("e1 + e9", 3).unwrap_err();
        assert_eq!(e.col, 6);
        let e = parse_vector("e1 $ e2", 3).unwrap_err();
        assert_eq!(e.col, 4);
    }

    #[test]
    fn out_of_range_and_malformed_labels() {
        assert!(parse_vector("e0", 3).is_err());
        assert!(parse_vector("e", 3).is_err());
        assert!(parse_vector("2e1", 3).is_err()); // needs 2*e1
        assert!(parse_vector("(e1", 3).is_err());
    }
}
