use super::{DiagCode, Diagnostic};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Token(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Token(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn token(&self) -> Option<&str> {
        match self {
            Sexp::Token(t, _) => Some(t),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Token(..) => None,
        }
    }

    /// The head token of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|l| l.first()).and_then(Sexp::token)
    }
}

/// Splits `text` into top-level s-expressions. `;` starts a comment that runs
/// to the end of the line.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, Diagnostic> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
            }
            '(' => {
                chars.next();
                column += 1;
                stack.push((Vec::new(), pos));
            }
            ')' => {
                chars.next();
                column += 1;
                let (items, start) = stack
                    .pop()
                    .ok_or_else(|| Diagnostic::at(DiagCode::Unbalanced, pos, "unexpected `)`"))?;
                let done = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(done),
                    None => top.push(done),
                }
            }
            _ => {
                let mut tok = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    tok.push(c);
                    chars.next();
                    column += 1;
                }
                let t = Sexp::Token(tok, pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(t),
                    None => top.push(t),
                }
            }
        }
    }
    if let Some((_, start)) = stack.pop() {
        return Err(Diagnostic::at(DiagCode::Unbalanced, start, "unclosed `(`"));
    }
    Ok(top)
}

/// Exactly one top-level expression.
pub fn parse_one(text: &str) -> Result<Sexp, Diagnostic> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Diagnostic::at(
            DiagCode::Syntax,
            Pos { line: 1, column: 1 },
            "empty input",
        )),
        _ => Err(Diagnostic::at(
            DiagCode::Syntax,
            all[1].pos(),
            "trailing input after the first expression",
        )),
    }
}
