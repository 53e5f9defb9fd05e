use url::Url;

/// Result of URL normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedUrl {
    Normalized(String),
    /// The input could not be parsed; the trimmed raw string is kept.
    Unnormalizable(String),
}

impl NormalizedUrl {
    pub fn as_str(&self) -> &str {
        match self {
            NormalizedUrl::Normalized(s) | NormalizedUrl::Unnormalizable(s) => s,
        }
    }

    pub fn into_string(self) -> String {
        match self {
            NormalizedUrl::Normalized(s) | NormalizedUrl::Unnormalizable(s) => s,
        }
    }

    pub fn is_normalized(&self) -> bool {
        matches!(self, NormalizedUrl::Normalized(_))
    }
}

/// Canonical form used as the document key.
///
/// Lowercases scheme and host, drops the fragment and any `utm_*` query
/// parameter, and gives an empty path the form `/`. Other query parameters
/// keep their original order and encoding.
pub fn normalize_url(raw: &str) -> NormalizedUrl {
    let trimmed = raw.trim();
    let mut url = match Url::parse(trimmed) {
        Ok(u) if u.has_host() => u,
        _ => return NormalizedUrl::Unnormalizable(trimmed.to_string()),
    };
    url.set_fragment(None);
    if let Some(query) = url.query() {
        let kept: Vec<&str> = query
            .split('&')
            .filter(|pair| {
                let key = pair.split('=').next().unwrap_or("");
                !pair.is_empty() && !key.to_ascii_lowercase().starts_with("utm_")
            })
            .collect();
        let rebuilt = kept.join("&");
        if rebuilt.is_empty() {
            url.set_query(None);
        } else {
            url.set_query(Some(&rebuilt));
        }
    }
    if url.path().is_empty() {
        url.set_path("/");
    }
    NormalizedUrl::Normalized(url.into())
}

/// Normalized string form, falling back to the trimmed raw input.
pub fn normalize_or_raw(raw: &str) -> String {
    normalize_url(raw).into_string()
}
