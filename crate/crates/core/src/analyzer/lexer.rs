use super::SyntaxError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Number(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: u32,
}

const PUNCTS: [&str; 22] = [
    "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", ";", ",", ".", "+", "=", "!", "<",
    ">", "[", "]", "*", "@",
];

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0usize;
    let mut line = 1u32;

    while pos < bytes.len() {
        let c = bytes[pos];
        match c {
            b'\n' => {
                line += 1;
                pos += 1;
            }
            b' ' | b'\t' | b'\r' | 0x0c => pos += 1,
            b'/' if bytes.get(pos + 1) == Some(&b'/') => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b'/' if bytes.get(pos + 1) == Some(&b'*') => {
                let start_line = line;
                pos += 2;
                loop {
                    if pos + 1 >= bytes.len() {
                        return Err(SyntaxError::new(start_line, "unterminated block comment"));
                    }
                    if bytes[pos] == b'*' && bytes[pos + 1] == b'/' {
                        pos += 2;
                        break;
                    }
                    if bytes[pos] == b'\n' {
                        line += 1;
                    }
                    pos += 1;
                }
            }
            b'"' => {
                let (value, next) = lex_string(text, pos + 1, line)?;
                tokens.push(Token {
                    tok: Tok::Str(value),
                    line,
                });
                pos = next;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'.' || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                tokens.push(Token {
                    tok: Tok::Number(text[start..pos].to_string()),
                    line,
                });
            }
            c if c == b'_' || c == b'$' || c.is_ascii_alphabetic() => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos] == b'_' || bytes[pos] == b'$' || bytes[pos].is_ascii_alphanumeric())
                {
                    pos += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(text[start..pos].to_string()),
                    line,
                });
            }
            _ => {
                let rest = &text[pos..];
                match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
                    Some(p) => {
                        tokens.push(Token {
                            tok: Tok::Punct(p),
                            line,
                        });
                        pos += p.len();
                    }
                    None => {
                        let ch = rest.chars().next().unwrap_or('?');
                        return Err(SyntaxError::new(line, format!("unexpected character `{ch}`")));
                    }
                }
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, line });
    Ok(tokens)
}

fn lex_string(text: &str, start: usize, line: u32) -> Result<(String, usize), SyntaxError> {
    let mut out = String::new();
    let mut chars = text[start..].char_indices();
    while let Some((off, ch)) = chars.next() {
        match ch {
            '"' => return Ok((out, start + off + 1)),
            '\n' => break,
            '\\' => {
                let (_, esc) = chars
                    .next()
                    .ok_or_else(|| SyntaxError::new(line, "unterminated string literal"))?;
                match esc {
                    'n' => out.push('\n'),
                    't' => out.push('\t'),
                    'r' => out.push('\r'),
                    'b' => out.push('\u{8}'),
                    'f' => out.push('\u{c}'),
                    '0' => out.push('\0'),
                    '"' => out.push('"'),
                    '\'' => out.push('\''),
                    '\\' => out.push('\\'),
                    'u' => {
                        let mut code = 0u32;
                        for _ in 0..4 {
                            let digit = chars
                                .next()
                                .and_then(|(_, d)| d.to_digit(16))
                                .ok_or_else(|| SyntaxError::new(line, "bad unicode escape"))?;
                            code = code * 16 + digit;
                        }
                        let ch = char::from_u32(code)
                            .ok_or_else(|| SyntaxError::new(line, "bad unicode escape"))?;
                        out.push(ch);
                    }
                    other => {
                        return Err(SyntaxError::new(
                            line,
                            format!("unsupported escape `\\{other}`"),
                        ))
                    }
                }
            }
            c => out.push(c),
        }
    }
    Err(SyntaxError::new(line, "unterminated string literal"))
}
