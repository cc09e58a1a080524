''' Register rule-based models
'''
from rlsupply.models.registration import register, load

register(
    model_id='supplychain-base-stock',
    entry_point='rlsupply.models.supplychain_rule_models:SupplyChainBaseStockModel')

register(
    model_id='supplychain-constant-order',
    entry_point='rlsupply.models.supplychain_rule_models:SupplyChainConstantOrderModel')
