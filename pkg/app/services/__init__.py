# Business Logic Services Package
