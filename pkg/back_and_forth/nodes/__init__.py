from .go_forth import go_forth, next_unmapped
from .go_back import go_back
from .check_guide import check_guide
from .certify import certify


__all__ = ["go_forth", "next_unmapped", "go_back", "check_guide", "certify"]
