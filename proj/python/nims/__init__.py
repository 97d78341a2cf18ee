"""Forward/backward-private multi-client encrypted keyword search.

The owner indexes documents and issues delete tokens; data users mint
search tokens and decrypt results without contacting the owner; the
database evaluates tokens over masked index matrices and walks hidden
per-keyword chains. All artifacts cross this API as the wire-format
bytes used by the TCP protocol.
"""

from ._nims import (
    Database,
    NimsError,
    Owner,
    Params,
    User,
    tokenize,
)

__all__ = ["Database", "NimsError", "Owner", "Params", "User", "tokenize"]
__version__ = "0.1.0"
