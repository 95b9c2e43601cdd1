"""Wire codecs: marshal/unmarshal plus a bytes encoder/decoder, as one object."""

from __future__ import annotations

import dataclasses
import typing as t

from searchlight import errors, marshals, serdes
from searchlight.py import compat

__all__ = ("Codec", "ScenarioCodec", "codec")


T = t.TypeVar("T")

EncoderT: t.TypeAlias = t.Callable[[serdes.MarshalledValueT], bytes]
"""Protocol for a wire serializer."""
DecoderT: t.TypeAlias = t.Callable[[bytes], serdes.MarshalledValueT]
"""Protocol for a wire deserializer."""


@dataclasses.dataclass(frozen=True, slots=True)
class Codec(t.Generic[T]):
    """Encode a value of `T` to bytes and decode it back."""

    marshal: t.Callable[[T], serdes.MarshalledValueT]
    """Reduces an instance of `T` to JSON-native values."""
    unmarshal: t.Callable[[serdes.MarshalledValueT], T]
    """Builds an instance of `T` from decoded values."""
    encoder: EncoderT
    decoder: DecoderT

    def encode(self, value: T) -> bytes:
        return self.encoder(self.marshal(value))

    def decode(self, value: bytes | str) -> T:
        return self.unmarshal(self.decoder(value))


@dataclasses.dataclass(frozen=True, slots=True)
class ScenarioCodec(Codec[T]):
    """A JSON codec whose parse failures carry their line and column.

    Note:
        Both backends raise a subclass of [`json.JSONDecodeError`][], which exposes
        `lineno` and `colno`.
    """

    def decode(self, value: bytes | str) -> T:
        try:
            decoded = self.decoder(value)
        except compat.JSONDecodeError as e:
            raise errors.ScenarioError(
                f"Malformed JSON: {e.msg}",
                line=getattr(e, "lineno", None),
                column=getattr(e, "colno", None),
            ) from e
        return self.unmarshal(decoded)


def codec(
    unmarshal: t.Callable[[serdes.MarshalledValueT], T],
    *,
    marshal: t.Callable[[T], serdes.MarshalledValueT] = marshals.marshal,
    encoder: EncoderT = compat.dumps,
    decoder: DecoderT = compat.loads,  # type: ignore[assignment]
    codec_cls: type[Codec[T]] = ScenarioCodec,
) -> Codec[T]:
    """Factory for a [`Codec`][searchlight.codecs.Codec], JSON by default.

    Examples:
        >>> from searchlight import codecs, unmarshals
        >>> cdc = codecs.codec(unmarshals.ScheduleUnmarshaller())
        >>> cdc.decode(b'{"kind": "linear", "rate": 2}')
        Linear(rate=2.0)
    """
    return codec_cls(marshal=marshal, unmarshal=unmarshal, encoder=encoder, decoder=decoder)
