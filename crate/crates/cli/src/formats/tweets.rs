//! Tweets file: one tweet per line, eight tab-separated fields, after a header
//! line naming them:
//!
//! `tweet_id  timestamp_utc  user_id  text  hashtags  retweeted_user  mentions  sentiment`
//!
//! `hashtags` and `mentions` are `;`-joined lists. `retweeted_user` and
//! `sentiment` are empty when absent; sentiment carries 6 decimals. Inside a field
//! a backslash escapes itself, `t` (tab), `n` (newline), `r` (carriage return) and,
//! inside list items, `;`.

use std::path::Path;

use upset_core::TweetRecord;

use super::{format_timestamp, parse_f64, parse_timestamp};
use crate::error::{CliError, CliResult};

pub const HEADER: &str =
    "tweet_id\ttimestamp_utc\tuser_id\ttext\thashtags\tretweeted_user\tmentions\tsentiment";

fn escape_into(out: &mut String, s: &str, in_list: bool) {
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            ';' if in_list => out.push_str("\\;"),
            c => out.push(c),
        }
    }
}

/// Splits an escaped field on unescaped `sep` and unescapes each piece.
fn split_unescape(field: &str, sep: Option<char>) -> Result<Vec<String>, String> {
    let mut parts = vec![String::new()];
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            let unescaped = match chars.next() {
                Some('\\') => '\\',
                Some('t') => '\t',
                Some('n') => '\n',
                Some('r') => '\r',
                Some(';') => ';',
                Some(other) => return Err(format!("unknown escape `\\{other}`")),
                None => return Err("dangling backslash".into()),
            };
            parts.last_mut().unwrap().push(unescaped);
        } else if Some(c) == sep {
            parts.push(String::new());
        } else {
            parts.last_mut().unwrap().push(c);
        }
    }
    Ok(parts)
}

fn unescape(field: &str) -> Result<String, String> {
    Ok(split_unescape(field, None)?.pop().unwrap_or_default())
}

fn unescape_list(field: &str) -> Result<Vec<String>, String> {
    if field.is_empty() {
        return Ok(Vec::new());
    }
    split_unescape(field, Some(';'))
}

pub fn format_tweet(t: &TweetRecord) -> String {
    let mut line = String::new();
    let join = |line: &mut String, items: &[String]| {
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                line.push(';');
            }
            escape_into(line, item, true);
        }
    };
    escape_into(&mut line, &t.tweet_id, false);
    line.push('\t');
    line.push_str(&format_timestamp(t.timestamp));
    line.push('\t');
    escape_into(&mut line, &t.user_id, false);
    line.push('\t');
    escape_into(&mut line, &t.text, false);
    line.push('\t');
    join(&mut line, &t.hashtags);
    line.push('\t');
    if let Some(rt) = &t.retweeted_user {
        escape_into(&mut line, rt, false);
    }
    line.push('\t');
    join(&mut line, &t.mentioned_users);
    line.push('\t');
    if let Some(s) = t.precomputed_sentiment {
        line.push_str(&format!("{s:.6}"));
    }
    line
}

pub fn parse_tweet_line(line: &str) -> Result<TweetRecord, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 8 {
        return Err(format!("expected 8 tab-separated fields, found {}", fields.len()));
    }
    let tweet_id = unescape(fields[0])?;
    if tweet_id.is_empty() {
        return Err("empty tweet_id".into());
    }
    let timestamp = parse_timestamp(fields[1])?;
    let mut tweet = TweetRecord::new(
        tweet_id,
        timestamp,
        unescape(fields[2])?,
        unescape(fields[3])?,
        unescape_list(fields[4])?,
    );
    let rt = unescape(fields[5])?;
    if !rt.is_empty() {
        tweet.retweeted_user = Some(rt);
    }
    tweet.mentioned_users = unescape_list(fields[6])?;
    if !fields[7].trim().is_empty() {
        let s = parse_f64(fields[7], "sentiment")?;
        tweet = tweet.with_sentiment(s).map_err(|e| e.to_string())?;
    }
    Ok(tweet)
}

pub fn parse_tweets(text: &str, origin: &Path) -> CliResult<Vec<TweetRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if i == 0 && line == HEADER {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        out.push(parse_tweet_line(line).map_err(|msg| CliError::parse(origin, i as u64 + 1, msg))?);
    }
    Ok(out)
}

pub fn read_tweets(path: &Path) -> CliResult<Vec<TweetRecord>> {
    parse_tweets(&crate::fsutil::read_to_string(path)?, path)
}

pub fn write_tweets(tweets: &[TweetRecord]) -> Vec<u8> {
    let mut out = String::with_capacity(tweets.len() * 64 + HEADER.len() + 1);
    out.push_str(HEADER);
    out.push('\n');
    for t in tweets {
        out.push_str(&format_tweet(t));
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use upset_core::Timestamp;

    #[test]
    fn escaping_examples() {
        let t = TweetRecord::new("1", Timestamp(0), "u", "line\none\ttab \\ back", ["bra"])
            .with_mentions(["a;b", "c"])
            .with_retweet_of("r")
            .with_sentiment(0.25)
            .unwrap();
        let line = format_tweet(&t);
        assert_eq!(
            line,
            "1\t1970-01-01T00:00:00Z\tu\tline\\none\\ttab \\\\ back\tbra\tr\ta\\;b;c\t0.250000"
        );
        assert_eq!(parse_tweet_line(&line).unwrap(), t);
    }

    #[test]
    fn bad_lines_rejected() {
        assert!(parse_tweet_line("1\t2014-01-01T00:00:00Z\tu").is_err());
        assert!(parse_tweet_line("1\t2014-01-01T00:00:00Z\tu\tx\\q\t\t\t\t").is_err());
        assert!(parse_tweet_line("1\t2014-01-01T00:00:00Z\tu\tx\t\t\t\t1.5").is_err());
        let err = parse_tweets(&format!("{HEADER}\nbroken\n"), Path::new("t")).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }));
    }

    fn arb_text() -> impl Strategy<Value = String> {
        "[a-z;\\\\\t\n\r é#]{0,20}"
    }

    proptest! {
        #[test]
        fn round_trip(
            id in "[a-z0-9]{1,8}",
            ts in 0i64..4_000_000_000,
            text in arb_text(),
            tags in proptest::collection::vec("[a-z0-9]{1,6}", 0..4),
            rt in proptest::option::of("[a-z;]{1,6}"),
            mentions in proptest::collection::vec(arb_text().prop_filter("non-empty", |s| !s.is_empty()), 0..3),
            score in proptest::option::of(0u32..=1_000_000),
        ) {
            let mut t = TweetRecord::new(id, Timestamp(ts), "user", text, tags).with_mentions(mentions);
            t.retweeted_user = rt;
            if let Some(s) = score {
                t = t.with_sentiment(s as f64 / 1e6).unwrap();
            }
            let back = parse_tweets(std::str::from_utf8(&write_tweets(std::slice::from_ref(&t))).unwrap(), Path::new("t")).unwrap();
            prop_assert_eq!(back, vec![t]);
        }
    }
}
