use std::fmt;

use super::ParseError;

/// 1-based line and column (columns count characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn new(line: usize, column: usize) -> Self {
        Position { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    Number,
    Inf,
    Zero,
    Dot,
    Semi,
    Minus,
    Plus,
    Star,
    LAngle,
    RAngle,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
    ParBar,
    Equals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: Position,
}

impl Token {
    /// Position just past the last character of the token.
    pub fn end(&self) -> Position {
        Position::new(self.position.line, self.position.column + self.lexeme.chars().count())
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = Position::new(line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                column += 1;
            }
            continue;
        }
        let (kind, len) = if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            let word: String = chars[i..i + len].iter().collect();
            (if word == "inf" { TokenKind::Inf } else { TokenKind::Ident }, len)
        } else if c.is_ascii_digit() {
            let len = number_length(&chars[i..]);
            let zero = len == 1 && c == '0';
            (if zero { TokenKind::Zero } else { TokenKind::Number }, len)
        } else {
            let two = chars.get(i + 1).copied();
            match c {
                '|' if two == Some('|') => (TokenKind::ParBar, 2),
                '.' => (TokenKind::Dot, 1),
                ';' => (TokenKind::Semi, 1),
                '-' => (TokenKind::Minus, 1),
                '+' => (TokenKind::Plus, 1),
                '*' => (TokenKind::Star, 1),
                '<' => (TokenKind::LAngle, 1),
                '>' => (TokenKind::RAngle, 1),
                ',' => (TokenKind::Comma, 1),
                '{' => (TokenKind::LBrace, 1),
                '}' => (TokenKind::RBrace, 1),
                '(' => (TokenKind::LParen, 1),
                ')' => (TokenKind::RParen, 1),
                '=' => (TokenKind::Equals, 1),
                _ => return Err(ParseError::Lex { position: start, found: c }),
            }
        };
        tokens.push(Token {
            kind,
            lexeme: chars[i..i + len].iter().collect(),
            position: start,
        });
        i += len;
        column += len;
    }
    Ok(tokens)
}

/// `digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ]`
fn number_length(chars: &[char]) -> usize {
    let digits_from = |at: usize| chars[at.min(chars.len())..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut len = digits_from(0);
    if chars.get(len) == Some(&'.') && digits_from(len + 1) > 0 {
        len += 1 + digits_from(len + 1);
    }
    if matches!(chars.get(len), Some('e') | Some('E')) {
        let sign = usize::from(matches!(chars.get(len + 1), Some('+') | Some('-')));
        let exp = digits_from(len + 1 + sign);
        if exp > 0 {
            len += 1 + sign + exp;
        }
    }
    len
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(source: &str) -> Vec<(TokenKind, String)> {
        tokenize(source)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    fn k(kind: TokenKind, lexeme: &str) -> (TokenKind, String) {
        (kind, lexeme.to_string())
    }

    #[test]
    fn prefix_with_rate() {
        assert_eq!(
            kinds("<a,0.3>.0"),
            vec![
                k(LAngle, "<"),
                k(Ident, "a"),
                k(Comma, ","),
                k(Number, "0.3"),
                k(RAngle, ">"),
                k(Dot, "."),
                k(Zero, "0"),
            ]
        );
    }

    #[test]
    fn probabilistic_choice() {
        assert_eq!(
            kinds("P*{0.25}Q"),
            vec![
                k(Ident, "P"),
                k(Star, "*"),
                k(LBrace, "{"),
                k(Number, "0.25"),
                k(RBrace, "}"),
                k(Ident, "Q"),
            ]
        );
    }

    #[test]
    fn empty_and_comments() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("  # only a comment\n\t\n").unwrap().is_empty());
    }

    #[test]
    fn parallel_bar_and_keywords() {
        assert_eq!(
            kinds("a.0||{}b - inf"),
            vec![
                k(Ident, "a"),
                k(Dot, "."),
                k(Zero, "0"),
                k(ParBar, "||"),
                k(LBrace, "{"),
                k(RBrace, "}"),
                k(Ident, "b"),
                k(Minus, "-"),
                k(Inf, "inf"),
            ]
        );
    }

    #[test]
    fn zero_followed_by_dot_is_not_a_number() {
        assert_eq!(kinds("0.a"), vec![k(Zero, "0"), k(Dot, "."), k(Ident, "a")]);
        assert_eq!(kinds("1e-3 2E5 10"), vec![k(Number, "1e-3"), k(Number, "2E5"), k(Number, "10")]);
        assert_eq!(kinds("1e"), vec![k(Number, "1"), k(Ident, "e")]);
    }

    #[test]
    fn positions_are_one_based() {
        let tokens = tokenize("P = a.0\n  Q").unwrap();
        assert_eq!(tokens[0].position, Position::new(1, 1));
        assert_eq!(tokens[2].position, Position::new(1, 5));
        assert_eq!(tokens[5].position, Position::new(2, 3));
        assert_eq!(tokens[4].end(), Position::new(1, 8));
    }

    #[test]
    fn rejects_stray_characters() {
        assert_eq!(
            tokenize("a.0 | b"),
            Err(ParseError::Lex { position: Position::new(1, 5), found: '|' })
        );
        assert!(matches!(tokenize("a ⊕ b"), Err(ParseError::Lex { found: '⊕', .. })));
    }
}
