"""Parse raw emails (.eml / mbox) into the structured form the features consume.

Deliberately pragmatic: required From header, optional Subject/Date, MIME
multipart limited to text/plain, text/html and attachment parts carrying a
filename. Links are found by scheme-prefix scan in plain text and by anchor-tag
scan in HTML, without a full DOM.
"""

from __future__ import annotations

import email
import html as html_lib
import ipaddress
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime
from email.policy import default as DEFAULT_POLICY
from email.utils import parseaddr, parsedate_to_datetime
from urllib.parse import urlsplit

from .errors import MalformedEmail, MalformedMbox

SCHEME_HTTP = "http"
SCHEME_HTTPS = "https"
SCHEME_OTHER = "other"


@dataclass(frozen=True)
class RawEmail:
    """Undecoded message bytes plus where they came from."""

    source_path: str
    data: bytes

    def __post_init__(self):
        if not self.data:
            raise MalformedEmail("empty message: %r" % (self.source_path,))


@dataclass(frozen=True)
class Link:
    raw_url: str
    scheme: str  # http | https | other
    host: str
    host_is_ip_literal: bool
    display_text: str | None = None
    wrapped_in_image_or_text: bool = False


@dataclass(frozen=True)
class Attachment:
    filename: str
    extension: str  # lowercased, after the final '.'; empty when none


@dataclass(frozen=True)
class ParsedEmail:
    """Header and body fields, reduced to exactly what the ten features read."""

    sender_address: str
    sender_domain: str
    subject: str
    date: datetime | None
    body_text: str
    links: list[Link] = field(default_factory=list)
    attachments: list[Attachment] = field(default_factory=list)


def _norm(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def _host_is_ip(host: str) -> bool:
    try:
        ipaddress.ip_address(host)
    except ValueError:
        return False
    return True


def make_link(url: str, display_text: str | None = None,
              wrapped: bool = False) -> Link:
    """Classify a URL into a Link; host lowercased, brackets stripped for IPv6."""
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    if scheme not in (SCHEME_HTTP, SCHEME_HTTPS):
        scheme = SCHEME_OTHER
    host = (parts.hostname or "").lower()
    return Link(
        raw_url=url,
        scheme=scheme,
        host=host,
        host_is_ip_literal=_host_is_ip(host),
        display_text=display_text,
        wrapped_in_image_or_text=wrapped,
    )


# A URL ends at whitespace, quotes, or the HTML-ish delimiters below.
# Trailing punctuation that usually belongs to the sentence is stripped after.
_URL_RE = re.compile(r"https?://[^\s<>\"']+", re.IGNORECASE)
_ANCHOR_RE = re.compile(
    r"<a\b[^>]*\bhref\s*=\s*(\"([^\"]*)\"|'([^']*)'|([^\s>]+))[^>]*>(.*?)</a\s*>",
    re.IGNORECASE | re.DOTALL,
)
_TAG_RE = re.compile(r"<[^>]+>")
_IMG_RE = re.compile(r"<img\b", re.IGNORECASE)


def _clean_url(url: str) -> str:
    return url.rstrip(".,;:!?)")


def strip_tags(markup: str) -> str:
    """Visible text of an HTML fragment: tags dropped, entities decoded."""
    return html_lib.unescape(_TAG_RE.sub(" ", markup)).strip()


def _anchor_link(href: str, inner: str) -> Link | None:
    url = _clean_url(html_lib.unescape(href.strip()))
    scheme = urlsplit(url).scheme.lower()
    if scheme not in (SCHEME_HTTP, SCHEME_HTTPS):
        return None
    visible = strip_tags(inner)
    visible = " ".join(visible.split())
    has_image = bool(_IMG_RE.search(inner))
    base = make_link(url, display_text=visible or None)
    wrapped = has_image or (
        visible != "" and visible != url and visible != base.host
    )
    return Link(
        raw_url=base.raw_url,
        scheme=base.scheme,
        host=base.host,
        host_is_ip_literal=base.host_is_ip_literal,
        display_text=visible or None,
        wrapped_in_image_or_text=wrapped,
    )


def extract_links(body: str) -> list[Link]:
    """All absolute http/https URLs in a body, each once, in document order.

    Anchor tags contribute their href (with display text and the hidden-link
    flag); the remaining text is scanned for bare URLs by scheme prefix.
    """
    found: list[tuple[int, Link]] = []
    masked = body
    for match in _ANCHOR_RE.finditer(body):
        href = match.group(2) or match.group(3) or match.group(4) or ""
        link = _anchor_link(href, match.group(5))
        if link is not None:
            found.append((match.start(), link))
        masked = masked[: match.start()] + " " * (match.end() - match.start()) \
            + masked[match.end():]
    for match in _URL_RE.finditer(masked):
        url = _clean_url(match.group(0))
        found.append((match.start(), make_link(url)))
    found.sort(key=lambda pair: pair[0])
    links: list[Link] = []
    seen: set[str] = set()
    for _, link in found:
        if link.raw_url not in seen:
            seen.add(link.raw_url)
            links.append(link)
    return links


def _decoded_text(part) -> str:
    try:
        return part.get_content()
    except Exception:
        payload = part.get_payload(decode=True) or b""
        charset = part.get_content_charset() or "utf-8"
        try:
            return payload.decode(charset, errors="replace")
        except LookupError:
            return payload.decode("utf-8", errors="replace")


def _attachment_from(part) -> Attachment | None:
    filename = part.get_filename()
    if not filename:
        return None
    filename = _norm(filename)
    stem, dot, ext = filename.rpartition(".")
    extension = ext.lower() if dot and stem else ""
    return Attachment(filename=filename, extension=extension)


def parse_email(raw: RawEmail) -> ParsedEmail:
    """Parse one message into a ParsedEmail.

    Raises MalformedEmail when the bytes carry no header block or no usable
    From address. Header decoding is best-effort; undecodable byte sequences
    are replaced, never fatal.
    """
    msg = email.message_from_bytes(raw.data, policy=DEFAULT_POLICY)
    for defect in msg.defects:
        if "MissingHeaderBodySeparator" in type(defect).__name__:
            raise MalformedEmail(
                "no header/body separator: %r" % (raw.source_path,))

    try:
        from_value = msg.get("From")
    except Exception:
        from_value = None
    if not from_value:
        raise MalformedEmail("no From header: %r" % (raw.source_path,))
    _, addr = parseaddr(str(from_value))
    addr = _norm(addr.strip().lower())
    if not addr:
        raise MalformedEmail("unparseable From header: %r" % (raw.source_path,))
    domain = addr.rsplit("@", 1)[1] if "@" in addr else ""

    try:
        subject = _norm(str(msg.get("Subject") or ""))
    except Exception:
        subject = ""

    date = None
    date_value = msg.get("Date")
    if date_value:
        try:
            date = parsedate_to_datetime(str(date_value))
        except (TypeError, ValueError):
            date = None

    plain_parts: list[str] = []
    html_parts: list[str] = []
    attachments: list[Attachment] = []
    for part in msg.walk():
        if part.is_multipart():
            continue
        attachment = _attachment_from(part)
        if attachment is not None:
            attachments.append(attachment)
            continue
        ctype = part.get_content_type()
        if ctype == "text/plain":
            plain_parts.append(_decoded_text(part))
        elif ctype == "text/html":
            html_parts.append(_decoded_text(part))

    links: list[Link] = []
    seen: set[str] = set()
    for chunk in plain_parts + html_parts:
        for link in extract_links(chunk):
            if link.raw_url not in seen:
                seen.add(link.raw_url)
                links.append(link)

    text_pieces = [piece.strip() for piece in plain_parts]
    text_pieces += [strip_tags(piece) for piece in html_parts]
    body_text = _norm("\n".join(piece for piece in text_pieces if piece))

    return ParsedEmail(
        sender_address=addr,
        sender_domain=domain,
        subject=subject,
        date=date,
        body_text=body_text,
        links=links,
        attachments=attachments,
    )


def parse_mbox(raw: bytes, source_path: str = "<mbox>") -> list[RawEmail]:
    """Split an mbox byte stream into per-message RawEmail values.

    Empty input yields an empty list; non-blank content before the first
    'From ' separator raises MalformedMbox. The separator line itself and the
    conventional blank line terminating each message are not part of the
    message bytes, so the result matches the individual .eml files the mbox
    was built from.
    """
    messages: list[RawEmail] = []
    current: list[bytes] | None = None

    def flush():
        if current is None:
            return
        body = b"".join(current)
        if body.endswith(b"\r\n\r\n"):
            body = body[:-2]
        elif body.endswith(b"\n\n"):
            body = body[:-1]
        messages.append(RawEmail(
            source_path="%s[%d]" % (source_path, len(messages)),
            data=body,
        ))

    for line in raw.splitlines(keepends=True):
        if line.startswith(b"From "):
            flush()
            current = []
        elif current is None:
            if line.strip():
                raise MalformedMbox(
                    "content before first 'From ' separator: %r"
                    % (source_path,))
        elif line.startswith(b">From "):
            current.append(line[1:])
        else:
            current.append(line)
    flush()
    return messages
