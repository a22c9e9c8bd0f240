class SpamHunterError(Exception):
    pass


class InputError(SpamHunterError, ValueError):
    pass


class CorpusError(InputError):
    def __init__(self, line_number, reason):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class TrainingError(SpamHunterError):
    pass


class ProtocolError(SpamHunterError):
    pass


class PresetNotFoundError(SpamHunterError, KeyError):
    def __str__(self):
        return f"unknown feature-set preset {self.args[0]!r}"


class ProviderError(SpamHunterError):
    pass


class ResolverError(SpamHunterError):
    pass
