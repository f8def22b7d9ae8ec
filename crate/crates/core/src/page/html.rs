//! Tolerant markup scanner. Not a validating parser: anything that does
//! not look like a tag is kept as text, and unterminated constructs drop
//! the remainder of the input.

/// Visible-text tokens and the number of `img` tags in `html`.
pub fn extract_text(html: &str) -> (Vec<String>, usize) {
    let mut text = String::with_capacity(html.len());
    let mut images = 0;
    let mut rest = html;

    while let Some(lt) = rest.find('<') {
        text.push_str(&decode_entities(&rest[..lt]));
        let after = &rest[lt..];

        if let Some(body) = after.strip_prefix("<!--") {
            rest = body.find("-->").map_or("", |i| &body[i + 3..]);
            text.push(' ');
            continue;
        }
        if after.starts_with("<!") || after.starts_with("<?") {
            rest = after.find('>').map_or("", |i| &after[i + 1..]);
            text.push(' ');
            continue;
        }

        let Some(tag) = scan_tag(after) else {
            // A lone '<' is text.
            text.push('<');
            rest = &after[1..];
            continue;
        };
        text.push(' ');
        rest = &after[tag.len..];

        if tag.closing {
            continue;
        }
        match tag.name.as_str() {
            "img" => images += 1,
            "script" | "style" if !tag.self_closing => {
                rest = skip_raw_text(rest, &tag.name);
            }
            _ => {}
        }
    }
    text.push_str(&decode_entities(rest));

    (super::tokenize(&text), images)
}

struct Tag {
    name: String,
    closing: bool,
    self_closing: bool,
    /// Byte length including the closing '>'.
    len: usize,
}

/// Recognize a tag at the start of `s` (which begins with '<').
fn scan_tag(s: &str) -> Option<Tag> {
    let bytes = s.as_bytes();
    let mut i = 1;
    let closing = bytes.get(i) == Some(&b'/');
    if closing {
        i += 1;
    }
    let name_start = i;
    if !bytes.get(i)?.is_ascii_alphabetic() {
        return None;
    }
    while i < bytes.len()
        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'-' || bytes[i] == b':')
    {
        i += 1;
    }
    let name = s[name_start..i].to_ascii_lowercase();

    let mut quote: Option<u8> = None;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => {
                let self_closing = i > 0 && bytes[i - 1] == b'/';
                return Some(Tag {
                    name,
                    closing,
                    self_closing,
                    len: i + 1,
                });
            }
            None => {}
        }
        i += 1;
    }
    // Unterminated tag: swallow the rest.
    Some(Tag {
        name,
        closing,
        self_closing: false,
        len: s.len(),
    })
}

/// Skip past `</name ...>`, case-insensitively. Returns "" if absent.
fn skip_raw_text<'a>(s: &'a str, name: &str) -> &'a str {
    let needle = format!("</{name}");
    let lower = s.to_ascii_lowercase();
    let mut from = 0;
    while let Some(pos) = lower[from..].find(&needle) {
        let at = from + pos;
        let next = lower.as_bytes().get(at + needle.len());
        if next.is_none_or(|b| !b.is_ascii_alphanumeric()) {
            return s[at..].find('>').map_or("", |i| &s[at + i + 1..]);
        }
        from = at + needle.len();
    }
    ""
}

fn decode_entities(s: &str) -> std::borrow::Cow<'_, str> {
    if !s.contains('&') {
        return s.into();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let after = &rest[amp + 1..];
        let decoded = after
            .find(';')
            .filter(|&semi| semi <= 10)
            .and_then(|semi| entity(&after[..semi]).map(|c| (c, semi)));
        match decoded {
            Some((c, semi)) => {
                out.push(c);
                rest = &after[semi + 1..];
            }
            None => {
                out.push('&');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out.into()
}

fn entity(name: &str) -> Option<char> {
    if let Some(num) = name.strip_prefix('#') {
        let code = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(code);
    }
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "eacute" => 'é',
        "egrave" => 'è',
        "ecirc" => 'ê',
        "agrave" => 'à',
        "acirc" => 'â',
        "ccedil" => 'ç',
        "ocirc" => 'ô',
        "ugrave" => 'ù',
        "icirc" => 'î',
        "rsquo" => '’',
        _ => return None,
    })
}
