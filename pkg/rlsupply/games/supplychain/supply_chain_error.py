'''
    File name: supplychain/supply_chain_error.py
'''


class SupplyChainError(Exception):
    pass


class ConfigurationError(SupplyChainError):
    pass


class ProtocolError(SupplyChainError):
    pass


class ActionError(SupplyChainError):
    pass


class UsageError(SupplyChainError):
    pass


class CheckpointError(SupplyChainError):
    pass


class SizeError(SupplyChainError):
    pass


class SchemaError(SupplyChainError):
    pass


class VerificationError(SupplyChainError):
    pass


class ShapeError(SupplyChainError, ValueError):
    pass
